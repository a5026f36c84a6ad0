#include "nucrobust/stain/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "nucrobust/core/errors.hpp"

namespace nucrobust::stain {

StainMatrix ruifrok_he_matrix() {
    StainMatrix W;
    W.col(0) = Eigen::Vector3d(0.650, 0.704, 0.286).normalized(); // Haematoxylin
    W.col(1) = Eigen::Vector3d(0.072, 0.990, 0.105).normalized(); // Eosin
    return W;
}

double stain_angle_deg(const StainMatrix& W) {
    const double n0 = W.col(0).norm();
    const double n1 = W.col(1).norm();
    if (n0 == 0.0 || n1 == 0.0) return 0.0;
    const double c = std::clamp(W.col(0).dot(W.col(1)) / (n0 * n1), -1.0, 1.0);
    return std::acos(c) * 180.0 / std::numbers::pi;
}

bool stain_model_degenerate(const StainModel& m) {
    if (stain_angle_deg(m.W) <= kMinStainAngleDeg) return true;
    const double hi = m.conc_scale.maxCoeff();
    return hi <= 0.0 || m.conc_scale.minCoeff() < 0.02 * hi;
}

Eigen::Matrix2Xd ruifrok_deconvolve(const ODImage& od, const StainMatrix& W) {
    if (stain_angle_deg(W) <= kMinStainAngleDeg)
        throw NumericalError("stain deconvolution: degenerate stain matrix (columns separated by <= 1 degree)");
    const Eigen::Matrix2d gram = W.transpose() * W;
    const Eigen::Matrix<double, 2, 3> pinv = gram.inverse() * W.transpose();
    return (pinv * od.od).cwiseMax(0.0);
}

Eigen::Matrix2Xd cd_concentrations(const Eigen::Matrix3Xd& od, const StainMatrix& W, double lambda,
                                   const Eigen::Matrix2Xd* warm_start) {
    const Eigen::Index n = od.cols();
    const double g = W.col(0).dot(W.col(1)); // columns are unit norm
    const Eigen::RowVectorXd b0 = W.col(0).transpose() * od;
    const Eigen::RowVectorXd b1 = W.col(1).transpose() * od;
    Eigen::RowVectorXd h0 = warm_start ? Eigen::RowVectorXd(warm_start->row(0))
                                       : Eigen::RowVectorXd(Eigen::RowVectorXd::Zero(n));
    Eigen::RowVectorXd h1 = warm_start ? Eigen::RowVectorXd(warm_start->row(1))
                                       : Eigen::RowVectorXd(Eigen::RowVectorXd::Zero(n));
    // Exact coordinate descent on the 2-variable problem; each sweep solves
    // both scalar subproblems in closed form.
    for (int sweep = 0; sweep < 60; ++sweep) {
        const Eigen::RowVectorXd prev0 = h0;
        const Eigen::RowVectorXd prev1 = h1;
        h0 = (b0 - g * h1).array() - 0.5 * lambda;
        h0 = h0.cwiseMax(0.0);
        h1 = (b1 - g * h0).array() - 0.5 * lambda;
        h1 = h1.cwiseMax(0.0);
        const double delta = (h0 - prev0).cwiseAbs().maxCoeff() + (h1 - prev1).cwiseAbs().maxCoeff();
        if (delta < 1e-10) break;
    }
    Eigen::Matrix2Xd conc(2, n);
    conc.row(0) = h0;
    conc.row(1) = h1;
    return conc;
}

Eigen::Matrix2Xd nnls_concentrations(const Eigen::Matrix3Xd& od, const StainMatrix& W,
                                     double lambda) {
    if (stain_angle_deg(W) <= kMinStainAngleDeg)
        throw NumericalError("stain unmixing: degenerate stain matrix");
    return cd_concentrations(od, W, lambda);
}

Eigen::Vector2d concentration_scale(const Eigen::Matrix2Xd& conc, const Eigen::ArrayXd& od_mag,
                                    double tissue_threshold) {
    std::vector<double> c0, c1;
    for (Eigen::Index i = 0; i < conc.cols(); ++i) {
        if (od_mag(i) > tissue_threshold) {
            c0.push_back(conc(0, i));
            c1.push_back(conc(1, i));
        }
    }
    auto p99 = [](std::vector<double>& v) {
        if (v.empty()) return 0.0;
        const std::size_t k =
            std::min(v.size() - 1, static_cast<std::size_t>(std::ceil(0.99 * v.size())) - 1);
        std::nth_element(v.begin(), v.begin() + k, v.end());
        return v[k];
    };
    return {p99(c0), p99(c1)};
}

StainModel fit_ruifrok(const RGBImage& img) {
    StainModel model;
    model.method = Method::ruifrok_fixed;
    model.W = ruifrok_he_matrix();
    const ODImage od = rgb_to_od(img);
    const Eigen::Matrix2Xd conc = ruifrok_deconvolve(od, model.W);
    model.conc_scale = concentration_scale(conc, od_magnitude(od));
    return model;
}

NormalizeResult stain_transfer(const RGBImage& src, const StainModel& src_model,
                               const StainModel& ref_model) {
    const ODImage od = rgb_to_od(src);
    Eigen::Matrix2Xd conc = src_model.method == Method::ruifrok_fixed
                                ? ruifrok_deconvolve(od, src_model.W)
                                : nnls_concentrations(od.od, src_model.W);
    const Eigen::Vector2d src_scale = concentration_scale(conc, od_magnitude(od));
    if (src_scale.maxCoeff() <= 0.0) return {src, true}; // no stained tissue to move
    for (int s = 0; s < 2; ++s) {
        // A stain absent from the source stays absent; only present channels
        // are rescaled to the reference percentile.
        if (src_scale(s) > 0.0 && ref_model.conc_scale(s) > 0.0)
            conc.row(s) *= ref_model.conc_scale(s) / src_scale(s);
    }
    ODImage out;
    out.width = od.width;
    out.height = od.height;
    out.od = ref_model.W * conc;
    return {od_to_rgb(out), false};
}

NormalizeResult ruifrok_normalize(const RGBImage& src, const StainModel& ref_model) {
    if (ref_model.method != Method::ruifrok_fixed)
        throw NumericalError("ruifrok_normalize: reference model is not a fixed-matrix model");
    StainModel src_model;
    src_model.method = Method::ruifrok_fixed;
    src_model.W = ruifrok_he_matrix();
    return stain_transfer(src, src_model, ref_model);
}

} // namespace nucrobust::stain
