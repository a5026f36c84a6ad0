#include "nucrobust/core/validate.hpp"

#include <map>
#include <set>

#include "nucrobust/core/errors.hpp"

namespace nucrobust {

ValidationReport validate_patch(const LabelledPatch& patch) {
    ValidationReport report;
    const auto& inst = patch.instances;
    const auto& cls = patch.classes;

    if (inst.width != cls.width || inst.height != cls.height) {
        report.issues.push_back({"dimension-mismatch",
                                 "instance map " + std::to_string(inst.width) + "x" + std::to_string(inst.height) +
                                     " vs class map " + std::to_string(cls.width) + "x" + std::to_string(cls.height),
                                 -1});
        return report; // pixelwise checks are meaningless past this point
    }
    if (patch.image && (patch.image->width != inst.width || patch.image->height != inst.height)) {
        report.issues.push_back({"dimension-mismatch",
                                 "image " + std::to_string(patch.image->width) + "x" + std::to_string(patch.image->height) +
                                     " vs label layers " + std::to_string(inst.width) + "x" + std::to_string(inst.height),
                                 -1});
    }

    std::map<std::uint32_t, std::set<int>> classes_of;
    std::set<std::uint32_t> background_class_reported;
    for (std::size_t i = 0; i < inst.labels.size(); ++i) {
        const std::uint32_t label = inst.labels[i];
        const int c = cls.classes[i];
        if (c > kNumClasses) {
            report.issues.push_back({"class-out-of-range",
                                     "class value " + std::to_string(c) + " at pixel " + std::to_string(i), -1});
            continue;
        }
        if (label == 0) continue;
        if (c == 0) {
            if (background_class_reported.insert(label).second) {
                report.issues.push_back({"unlabelled-class",
                                         "instance " + std::to_string(label) + " has pixels with background class",
                                         static_cast<std::int64_t>(label)});
            }
            continue;
        }
        classes_of[label].insert(c);
    }
    for (const auto& [label, cs] : classes_of) {
        if (cs.size() > 1) {
            std::string list;
            for (int c : cs) list += (list.empty() ? "" : ",") + std::to_string(c);
            report.issues.push_back({"mixed-class-instance",
                                     "instance " + std::to_string(label) + " spans classes {" + list + "}",
                                     static_cast<std::int64_t>(label)});
        }
    }
    return report;
}

InstanceMap relabel_consecutive(const InstanceMap& m) {
    InstanceMap out(m.width, m.height);
    std::map<std::uint32_t, std::uint32_t> remap;
    std::uint32_t next = 1;
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        const std::uint32_t label = m.labels[i];
        if (label == 0) continue;
        auto [it, inserted] = remap.try_emplace(label, next);
        if (inserted) ++next;
        out.labels[i] = it->second;
    }
    return out;
}

std::vector<InventoryEntry> instance_inventory(const InstanceMap& m, const ClassMap& c) {
    std::map<std::uint32_t, InventoryEntry> entries;
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        const std::uint32_t label = m.labels[i];
        if (label == 0) continue;
        const int cls = c.classes[i];
        auto [it, inserted] = entries.try_emplace(label, InventoryEntry{label, cls, 0});
        if (!inserted && it->second.cls != cls) {
            throw ValidationError("instance " + std::to_string(label) + " spans classes " +
                                  std::to_string(it->second.cls) + " and " + std::to_string(cls));
        }
        ++it->second.pixel_count;
    }
    std::vector<InventoryEntry> out;
    out.reserve(entries.size());
    for (const auto& [label, e] : entries) out.push_back(e);
    return out;
}

} // namespace nucrobust
