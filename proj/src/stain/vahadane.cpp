#include "nucrobust/stain/vahadane.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "nucrobust/core/errors.hpp"

namespace nucrobust::stain {

namespace {

// Seeded tissue subsample: shuffle the tissue column indices and keep the
// first max_pixels of them.
Eigen::Matrix3Xd tissue_sample(const ODImage& od, const VahadaneParams& params) {
    const Eigen::ArrayXd mag = od_magnitude(od);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < mag.size(); ++i)
        if (mag(i) > params.tissue_threshold) idx.push_back(i);
    if (static_cast<int>(idx.size()) < params.min_tissue)
        throw NumericalError("vahadane_fit: insufficient tissue pixels (" + std::to_string(idx.size()) +
                             " < " + std::to_string(params.min_tissue) + ")");
    if (static_cast<int>(idx.size()) > params.max_pixels) {
        std::mt19937_64 rng(params.seed);
        for (int i = 0; i < params.max_pixels; ++i) {
            const std::size_t j = i + rng() % (idx.size() - i);
            std::swap(idx[i], idx[j]);
        }
        idx.resize(params.max_pixels);
        std::sort(idx.begin(), idx.end());
    }
    Eigen::Matrix3Xd V(3, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) V.col(k) = od.od.col(idx[k]);
    return V;
}

double objective_value(const Eigen::Matrix3Xd& V, const StainMatrix& W, const Eigen::Matrix2Xd& H,
                       double lambda) {
    return (V - W * H).squaredNorm() + lambda * H.sum();
}

} // namespace

VahadaneFit vahadane_fit(const RGBImage& img, const VahadaneParams& params) {
    const ODImage od = rgb_to_od(img);
    const Eigen::Matrix3Xd V = tissue_sample(od, params);

    std::mt19937_64 rng(params.seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    StainMatrix W = ruifrok_he_matrix();
    for (int c = 0; c < 2; ++c) {
        for (int r = 0; r < 3; ++r) W(r, c) = std::max(0.0, W(r, c) + jitter(rng));
        const double norm = W.col(c).norm();
        W.col(c) = norm > 0.0 ? Eigen::Vector3d(W.col(c) / norm) : ruifrok_he_matrix().col(c);
    }

    VahadaneFit fit;
    fit.model.method = Method::vahadane_fit;
    fit.model.lambda = params.lambda;
    fit.model.seed = params.seed;
    fit.model.converged = false;

    Eigen::Matrix2Xd H = cd_concentrations(V, W, params.lambda);
    double prev = objective_value(V, W, H, params.lambda);
    fit.objective.push_back(prev);

    for (int iter = 0; iter < params.max_iters; ++iter) {
        // W step: projected gradient with backtracking; only steps that do
        // not increase the residual are taken, so the objective cannot rise.
        const Eigen::Matrix3Xd residual = V - W * H;
        const Eigen::Matrix<double, 3, 2> grad = -2.0 * residual * H.transpose();
        const double hh_norm = (H * H.transpose()).norm();
        double step = hh_norm > 0.0 ? 0.5 / hh_norm : 1.0;
        const double res_now = residual.squaredNorm();
        for (int bt = 0; bt < 30; ++bt, step *= 0.5) {
            StainMatrix cand = (W - step * grad).cwiseMax(0.0);
            bool ok = true;
            for (int c = 0; c < 2; ++c) {
                const double norm = cand.col(c).norm();
                if (norm <= 1e-12) {
                    ok = false;
                    break;
                }
                cand.col(c) /= norm;
            }
            if (!ok) continue;
            if ((V - cand * H).squaredNorm() <= res_now) {
                W = cand;
                break;
            }
        }

        // H step: warm-started coordinate descent; never increases the
        // objective relative to the previous H.
        H = cd_concentrations(V, W, params.lambda, &H);

        const double now = objective_value(V, W, H, params.lambda);
        fit.objective.push_back(now);
        if (prev - now <= params.tol * std::max(1.0, prev)) {
            fit.model.converged = true;
            prev = now;
            break;
        }
        prev = now;
    }

    // Haematoxylin is the more blue-absorbing column.
    if (W(2, 0) < W(2, 1)) W.col(0).swap(W.col(1));
    fit.model.W = W;

    // Percentiles come from plain NNLS concentrations, matching what the
    // transfer step computes at normalization time.
    if (stain_angle_deg(W) > kMinStainAngleDeg) {
        const Eigen::Matrix2Xd conc = nnls_concentrations(V, W, 0.0);
        fit.model.conc_scale =
            concentration_scale(conc, V.colwise().norm().transpose().array(), params.tissue_threshold);
    }
    return fit;
}

VahadaneResult vahadane_normalize(const RGBImage& src, const RGBImage& ref,
                                  const VahadaneParams& params) {
    const VahadaneFit src_fit = vahadane_fit(src, params);
    const VahadaneFit ref_fit = vahadane_fit(ref, params);

    VahadaneResult out;
    if (stain_model_degenerate(src_fit.model) || stain_model_degenerate(ref_fit.model)) {
        out.image = src;
        out.verdict.plausible = false;
        out.verdict.reasons.emplace_back("degenerate stain matrix");
        return out;
    }
    out.image = stain_transfer(src, src_fit.model, ref_fit.model).image;
    out.verdict = plausibility_check(out.image);
    return out;
}

} // namespace nucrobust::stain
