#include "nucrobust/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "nucrobust/core/errors.hpp"
#include "nucrobust/perturb/compression.hpp"

namespace nucrobust::harness {

namespace fs = std::filesystem;

namespace {

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

std::string f6(double v) { return std::isfinite(v) ? fmt("%.6f", v) : "nan"; }

struct Rgb8 {
    int r, g, b;
};

std::string css(const Rgb8& c) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

Rgb8 lerp(const Rgb8& a, const Rgb8& b, double t) {
    auto mix = [&](int x, int y) { return static_cast<int>(std::lround(x + (y - x) * t)); };
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

// Dark-violet to yellow sequential ramp for density maps.
Rgb8 sequential_ramp(double t) {
    static const Rgb8 stops[] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int k = std::min(3, static_cast<int>(t));
    return lerp(stops[k], stops[k + 1], t - k);
}

// Blue-white-red diverging ramp for signed deltas, t in [-1, 1].
Rgb8 diverging_ramp(double t) {
    t = std::clamp(t, -1.0, 1.0);
    const Rgb8 blue{49, 54, 149}, white{247, 247, 247}, red{165, 0, 38};
    return t < 0.0 ? lerp(white, blue, -t) : lerp(white, red, t);
}

std::string svg_header(int w, int h) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) + "\" height=\"" +
           std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n";
}

std::string text_at(double x, double y, const std::string& s, const std::string& attrs = "") {
    return "  <text x=\"" + fmt("%.1f", x) + "\" y=\"" + fmt("%.1f", y) + "\" " + attrs + ">" + s +
           "</text>\n";
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
}

} // namespace

std::string summary_csv(const RunOutput& output) {
    std::string csv = "variant,auc,delta_auc\n";
    for (const auto& r : output.records) {
        csv += r.descriptor + ",";
        if (r.evaluated)
            csv += f6(r.auc) + "," + f6(r.kind == "control" ? 0.0 : r.delta_auc) + "\n";
        else
            csv += "nan,nan\n";
    }
    return csv;
}

std::string quality_curve_svg(const RunOutput& output, const std::string& codec) {
    struct Point {
        int quality;
        double auc;
    };
    std::vector<Point> points;
    double control_auc = 0.0;
    for (const auto& r : output.records) {
        if (r.kind == "control") control_auc = r.auc;
        if (r.kind == "compress" && r.codec == codec && r.evaluated) points.push_back({r.quality, r.auc});
    }
    std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) { return a.quality < b.quality; });

    const int W = 640, H = 420, ML = 70, MR = 30, MT = 40, MB = 50;
    const double PW = W - ML - MR, PH = H - MT - MB;
    auto px = [&](double q) { return ML + PW * q / 100.0; };
    auto py = [&](double auc) { return MT + PH * (1.0 - auc / 0.5); };

    std::string svg = svg_header(W, H);
    svg += text_at(ML, MT - 16, "threshold-averaged multi-class panoptic quality vs " + codec + " quality",
                   "font-size=\"14\"");
    // frame and ticks
    svg += "  <rect x=\"" + std::to_string(ML) + "\" y=\"" + std::to_string(MT) + "\" width=\"" +
           fmt("%.1f", PW) + "\" height=\"" + fmt("%.1f", PH) + "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = i * 0.1; // tick at 0, 0.1, ..., 0.5 on the score axis
        svg += "  <line x1=\"" + std::to_string(ML - 4) + "\" y1=\"" + fmt("%.1f", py(v)) + "\" x2=\"" +
               std::to_string(ML) + "\" y2=\"" + fmt("%.1f", py(v)) + "\" stroke=\"#333\"/>\n";
        svg += text_at(ML - 44, py(v) + 4, fmt("%.2f", v));
    }
    for (int q = 0; q <= 100; q += 20) {
        svg += "  <line x1=\"" + fmt("%.1f", px(q)) + "\" y1=\"" + fmt("%.1f", MT + PH) + "\" x2=\"" +
               fmt("%.1f", px(q)) + "\" y2=\"" + fmt("%.1f", MT + PH + 4) + "\" stroke=\"#333\"/>\n";
        svg += text_at(px(q) - 8, MT + PH + 18, std::to_string(q));
    }
    svg += text_at(ML + PW / 2 - 30, H - 12, "quality");

    // control baseline
    svg += "  <line x1=\"" + std::to_string(ML) + "\" y1=\"" + fmt("%.1f", py(control_auc)) + "\" x2=\"" +
           fmt("%.1f", ML + PW) + "\" y2=\"" + fmt("%.1f", py(control_auc)) +
           "\" stroke=\"#888\" stroke-dasharray=\"6,4\"/>\n";
    svg += text_at(ML + 6, py(control_auc) - 6, "control " + f6(control_auc), "fill=\"#666\"");

    // recommended default marker
    const int rec = perturb::recommended_quality(perturb::codec_from_string(codec));
    svg += "  <line x1=\"" + fmt("%.1f", px(rec)) + "\" y1=\"" + std::to_string(MT) + "\" x2=\"" +
           fmt("%.1f", px(rec)) + "\" y2=\"" + fmt("%.1f", MT + PH) +
           "\" stroke=\"#2a7\" stroke-dasharray=\"2,4\"/>\n";
    svg += text_at(px(rec) + 4, MT + 14, "recommended default q=" + std::to_string(rec), "fill=\"#2a7\"");

    if (!points.empty()) {
        std::string poly = "  <polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : points) poly += fmt("%.1f", px(p.quality)) + "," + fmt("%.1f", py(p.auc)) + " ";
        svg += poly + "\"/>\n";
        for (const auto& p : points) {
            svg += "  <circle cx=\"" + fmt("%.1f", px(p.quality)) + "\" cy=\"" + fmt("%.1f", py(p.auc)) +
                   "\" r=\"3\" fill=\"#1f5fa8\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

std::string kde_svg(const SpaceStats& stats) {
    const auto& grid = stats.kde;
    const int W = 560, H = 560, ML = 70, MT = 40, MB = 50;
    const double plot = 440.0;
    const double cell = plot / grid.bins;
    const double maxd = std::max(grid.density.maxCoeff(), 1e-300);

    const bool hsv = stats.space == color::Space::hsv;
    std::string svg = svg_header(W, H);
    svg += text_at(ML, MT - 16,
                   std::string("patch mean-color density, ") + color::to_string(stats.space) +
                       " (fixed " + (hsv ? "V" : "L") + "=" + fmt("%.3f", stats.mean_w) + ")",
                   "font-size=\"14\"");
    for (int i = 0; i < grid.bins; ++i) {
        for (int j = 0; j < grid.bins; ++j) {
            const Rgb8 c = sequential_ramp(grid.density(i, j) / maxd);
            const double x = ML + i * cell;
            const double y = MT + (grid.bins - 1 - j) * cell;
            svg += "  <rect x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", y) + "\" width=\"" +
                   fmt("%.2f", cell + 0.05) + "\" height=\"" + fmt("%.2f", cell + 0.05) + "\" fill=\"" +
                   css(c) + "\"/>\n";
        }
    }
    svg += "  <rect x=\"" + std::to_string(ML) + "\" y=\"" + std::to_string(MT) + "\" width=\"" +
           fmt("%.1f", plot) + "\" height=\"" + fmt("%.1f", plot) + "\" fill=\"none\" stroke=\"#333\"/>\n";
    svg += text_at(ML, MT + plot + 18, fmt("%.1f", grid.spec.u_lo));
    svg += text_at(ML + plot - 30, MT + plot + 18, fmt("%.1f", grid.spec.u_hi));
    svg += text_at(ML + plot / 2 - 10, MT + plot + 34, hsv ? "H" : "a*");
    svg += text_at(ML - 40, MT + plot, fmt("%.1f", grid.spec.v_lo));
    svg += text_at(ML - 40, MT + 10, fmt("%.1f", grid.spec.v_hi));
    svg += text_at(ML - 40, MT + plot / 2, hsv ? "S" : "b*");
    (void)MB;
    svg += "</svg>\n";
    return svg;
}

std::string reference_grid_svg(const RunOutput& output, const RefsetRecord& refset) {
    const int steps = refset.set.spec.steps;
    const int W = 640, H = 620, ML = 70, MT = 60;
    const double plot = 480.0;
    const double cell = plot / steps;

    // Records belonging to this refset, keyed by reference id.
    std::map<std::string, const RunRecord*> by_ref;
    double max_abs = 0.0;
    for (const auto& r : output.records) {
        if (r.kind != "colorshift" || r.method != refset.method ||
            r.space != color::to_string(refset.space))
            continue;
        by_ref[r.reference_id] = &r;
        if (r.evaluated) max_abs = std::max(max_abs, std::abs(r.delta_auc));
    }
    if (max_abs <= 0.0) max_abs = 1e-9;

    const bool hsv = refset.space == color::Space::hsv;
    std::string svg = svg_header(W, H);
    svg += text_at(ML, 20,
                   "change in threshold-averaged panoptic quality vs control, " + refset.method + " / " +
                       color::to_string(refset.space),
                   "font-size=\"14\"");
    svg += text_at(ML, 38, "tiles sit at their sampling-grid color; red = above control, blue = below;"
                           " hatched = excluded references");
    svg += "  <defs><pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"6\" height=\"6\">"
           "<path d=\"M0,6 L6,0\" stroke=\"#444\" stroke-width=\"1\"/></pattern></defs>\n";

    for (const auto& ref : refset.set.refs) {
        const int iu = ref.grid_index / steps;
        const int iv = ref.grid_index % steps;
        const double x = ML + iu * cell;
        const double y = MT + (steps - 1 - iv) * cell;
        const RunRecord* rec = by_ref.count(ref.patch_id) ? by_ref.at(ref.patch_id) : nullptr;
        std::string fill = "#ddd";
        bool hatched = true;
        if (rec != nullptr) {
            hatched = rec->aborted || !rec->exclusions.empty() || !rec->evaluated;
            if (rec->evaluated) fill = css(diverging_ramp(rec->delta_auc / max_abs));
        }
        svg += "  <rect x=\"" + fmt("%.2f", x + 1) + "\" y=\"" + fmt("%.2f", y + 1) + "\" width=\"" +
               fmt("%.2f", cell - 2) + "\" height=\"" + fmt("%.2f", cell - 2) + "\" fill=\"" + fill +
               "\" stroke=\"#999\"/>\n";
        if (hatched) {
            svg += "  <rect x=\"" + fmt("%.2f", x + 1) + "\" y=\"" + fmt("%.2f", y + 1) + "\" width=\"" +
                   fmt("%.2f", cell - 2) + "\" height=\"" + fmt("%.2f", cell - 2) +
                   "\" fill=\"url(#hatch)\" stroke=\"none\"/>\n";
        }
    }
    svg += "  <rect x=\"" + std::to_string(ML) + "\" y=\"" + std::to_string(MT) + "\" width=\"" +
           fmt("%.1f", plot) + "\" height=\"" + fmt("%.1f", plot) + "\" fill=\"none\" stroke=\"#333\"/>\n";
    svg += text_at(ML, MT + plot + 18, fmt("%.1f", refset.set.spec.u_lo));
    svg += text_at(ML + plot - 30, MT + plot + 18, fmt("%.1f", refset.set.spec.u_hi));
    svg += text_at(ML + plot / 2 - 10, MT + plot + 34, hsv ? "H" : "a*");
    svg += text_at(ML - 44, MT + plot, fmt("%.1f", refset.set.spec.v_lo));
    svg += text_at(ML - 44, MT + 10, fmt("%.1f", refset.set.spec.v_hi));
    svg += text_at(ML - 44, MT + plot / 2, hsv ? "S" : "b*");
    svg += text_at(ML, MT + plot + 52, "delta range: +/-" + f6(max_abs));
    svg += "</svg>\n";
    return svg;
}

void emit_report(const RunOutput& output, const fs::path& out_dir) {
    if (output.records.empty()) throw ValidationError("emit_report: no run records");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

    write_text_file(out_dir / "summary.csv", summary_csv(output));

    std::set<std::string> codecs;
    for (const auto& r : output.records)
        if (r.kind == "compress") codecs.insert(r.codec);
    for (const auto& codec : codecs)
        write_text_file(out_dir / ("quality_curve_" + codec + ".svg"), quality_curve_svg(output, codec));

    for (const auto& stats : output.stats)
        write_text_file(out_dir / ("kde_" + color::to_string(stats.space) + ".svg"), kde_svg(stats));

    for (const auto& refset : output.refsets) {
        write_text_file(out_dir / ("reference_grid_" + refset.method + "_" +
                                   color::to_string(refset.space) + ".svg"),
                        reference_grid_svg(output, refset));
    }

    write_text_file(out_dir / "report.json", run_output_json(output));
}

} // namespace nucrobust::harness
