#include "nucrobust/color/references.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "nucrobust/core/errors.hpp"

namespace nucrobust::color {

ReferenceSet sample_references(const std::vector<std::pair<std::string, ColorPoint>>& dataset,
                               const PlaneSpec& spec, double w_fixed) {
    spec.validate();
    if (dataset.empty()) throw ValidationError("sample_references: empty dataset");

    const double u_span = spec.u_hi - spec.u_lo;
    const double v_span = spec.v_hi - spec.v_lo;

    struct Claim {
        double distance;
        int grid_index;
        double grid_u, grid_v;
    };
    std::map<std::string, Claim> best_claim; // patch id -> its closest grid point

    for (int iu = 0; iu < spec.steps; ++iu) {
        const double gu = spec.u_lo + iu * u_span / (spec.steps - 1);
        for (int iv = 0; iv < spec.steps; ++iv) {
            const double gv = spec.v_lo + iv * v_span / (spec.steps - 1);
            const int index = iu * spec.steps + iv;

            const std::string* nearest = nullptr;
            double nearest_d = 0.0;
            for (const auto& [id, p] : dataset) {
                const double du = (p.u - gu) / u_span;
                const double dv = (p.v - gv) / v_span;
                const double d = std::sqrt(du * du + dv * dv);
                if (!nearest || d < nearest_d) {
                    nearest = &id;
                    nearest_d = d;
                }
            }
            auto [it, inserted] = best_claim.try_emplace(*nearest, Claim{nearest_d, index, gu, gv});
            if (!inserted && nearest_d < it->second.distance)
                it->second = Claim{nearest_d, index, gu, gv};
        }
    }

    ReferenceSet out;
    out.spec = spec;
    out.w_fixed = w_fixed;
    for (const auto& [id, claim] : best_claim)
        out.refs.push_back({claim.grid_index, claim.grid_u, claim.grid_v, id, claim.distance});
    std::sort(out.refs.begin(), out.refs.end(),
              [](const Reference& a, const Reference& b) { return a.grid_index < b.grid_index; });
    return out;
}

std::string reference_set_json(const ReferenceSet& set) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : set.refs) {
        arr.push_back({{"grid_u", r.grid_u},
                       {"grid_v", r.grid_v},
                       {"w", set.w_fixed},
                       {"patch_id", r.patch_id},
                       {"distance", r.distance}});
    }
    return arr.dump(2) + "\n";
}

ReferenceSet reference_set_from_json(const std::string& json_text, const PlaneSpec& spec) {
    ReferenceSet set;
    set.spec = spec;
    nlohmann::json arr;
    try {
        arr = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("reference set: malformed JSON: ") + e.what());
    }
    if (!arr.is_array()) throw IoError("reference set: expected a JSON array");
    const double u_span = spec.u_hi - spec.u_lo;
    const double v_span = spec.v_hi - spec.v_lo;
    for (const auto& item : arr) {
        Reference r;
        r.grid_u = item.at("grid_u").get<double>();
        r.grid_v = item.at("grid_v").get<double>();
        r.patch_id = item.at("patch_id").get<std::string>();
        r.distance = item.at("distance").get<double>();
        set.w_fixed = item.at("w").get<double>();
        const int iu = static_cast<int>(std::lround((r.grid_u - spec.u_lo) / u_span * (spec.steps - 1)));
        const int iv = static_cast<int>(std::lround((r.grid_v - spec.v_lo) / v_span * (spec.steps - 1)));
        r.grid_index = iu * spec.steps + iv;
        set.refs.push_back(r);
    }
    return set;
}

} // namespace nucrobust::color
