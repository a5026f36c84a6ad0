#include "nucrobust/harness/bundle_io.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "nucrobust/core/errors.hpp"
#include "nucrobust/core/validate.hpp"
#include "nucrobust/io/codec.hpp"

namespace nucrobust::harness {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json lineage_to_json(const LineageEntry& e) {
    json entry;
    entry["type"] = e.type;
    if (!e.codec.empty()) entry["codec"] = e.codec;
    if (e.quality >= 0) entry["quality"] = e.quality;
    if (!e.method.empty()) entry["method"] = e.method;
    if (!e.reference_id.empty()) entry["reference_id"] = e.reference_id;
    if (e.seed >= 0) entry["seed"] = e.seed;
    json excluded = json::array();
    for (const auto& x : e.excluded) excluded.push_back({{"patch_id", x.patch_id}, {"reason", x.reason}});
    entry["excluded"] = excluded;
    return entry;
}

LineageEntry lineage_from_json(const json& entry) {
    LineageEntry e;
    e.type = entry.value("type", "");
    e.codec = entry.value("codec", "");
    e.quality = entry.value("quality", -1);
    e.method = entry.value("method", "");
    e.reference_id = entry.value("reference_id", "");
    e.seed = entry.value("seed", std::int64_t{-1});
    if (entry.contains("excluded")) {
        for (const auto& x : entry["excluded"])
            e.excluded.push_back({x.at("patch_id").get<std::string>(), x.at("reason").get<std::string>()});
    }
    return e;
}

void write_file(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to '" + path.string() + "'");
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

void save_bundle(const Bundle& bundle, const fs::path& dir) {
    std::set<std::string> ids;
    for (const auto& p : bundle.patches)
        if (!ids.insert(p.id).second)
            throw ValidationError("save_bundle: duplicate patch id '" + p.id + "'");

    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());

    json manifest;
    manifest["format_version"] = 1;
    manifest["name"] = bundle.name;
    json lineage = json::array();
    for (const auto& e : bundle.lineage) lineage.push_back(lineage_to_json(e));
    manifest["lineage"] = lineage;
    json patch_ids = json::array();
    for (const auto& p : bundle.patches) patch_ids.push_back(p.id);
    manifest["patches"] = patch_ids;

    const std::string text = manifest.dump(2) + "\n";
    std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write manifest in '" + dir.string() + "'");
    out << text;
    out.close();

    for (const auto& p : bundle.patches) {
        if (p.image) write_file(dir / ("img_" + p.id + ".png"), io::png_encode_rgb(*p.image));
        write_file(dir / ("inst_" + p.id + ".png"), io::png_encode_gray16(p.instances));
        write_file(dir / ("cls_" + p.id + ".png"), io::png_encode_gray8(p.classes));
    }
}

Bundle load_bundle(const fs::path& dir) {
    const fs::path manifest_path = dir / "manifest.json";
    if (!fs::exists(manifest_path)) throw IoError("no manifest.json in '" + dir.string() + "'");

    json manifest;
    try {
        std::ifstream in(manifest_path);
        manifest = json::parse(in);
    } catch (const json::exception& e) {
        throw IoError("malformed manifest in '" + dir.string() + "': " + e.what());
    }
    if (manifest.value("format_version", 0) != 1)
        throw IoError("unsupported bundle format_version in '" + dir.string() + "'");

    Bundle bundle;
    bundle.name = manifest.value("name", dir.filename().string());
    if (manifest.contains("lineage"))
        for (const auto& e : manifest["lineage"]) bundle.lineage.push_back(lineage_from_json(e));

    std::set<std::string> seen;
    for (const auto& id_json : manifest.at("patches")) {
        const std::string id = id_json.get<std::string>();
        if (!seen.insert(id).second)
            throw ValidationError("bundle '" + dir.string() + "': duplicate patch id '" + id + "'");

        LabelledPatch patch;
        patch.id = id;
        const fs::path img = dir / ("img_" + id + ".png");
        const fs::path inst = dir / ("inst_" + id + ".png");
        const fs::path cls = dir / ("cls_" + id + ".png");
        if (!fs::exists(inst)) throw IoError("patch '" + id + "': missing " + inst.filename().string());
        if (!fs::exists(cls)) throw IoError("patch '" + id + "': missing " + cls.filename().string());
        if (fs::exists(img)) patch.image = io::png_decode_rgb(read_file(img));
        patch.instances = io::png_decode_gray16(read_file(inst));
        patch.classes = io::png_decode_gray8(read_file(cls));

        const ValidationReport report = validate_patch(patch);
        if (!report.ok())
            throw ValidationError("patch '" + id + "' invalid: " + report.issues.front().kind + ": " +
                                  report.issues.front().detail);
        bundle.patches.push_back(std::move(patch));
    }
    return bundle;
}

} // namespace nucrobust::harness
