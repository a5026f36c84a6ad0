#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "nucrobust/core/image.hpp"
#include "nucrobust/stain/od.hpp"

namespace nucrobust::stain {

// Columns are unit-norm stain OD vectors: Haematoxylin first, then Eosin.
using StainMatrix = Eigen::Matrix<double, 3, 2>;

enum class Method { ruifrok_fixed, vahadane_fit };

struct StainModel {
    StainMatrix W = StainMatrix::Zero();
    Eigen::Vector2d conc_scale = Eigen::Vector2d::Zero(); // 99th percentile per stain
    Method method = Method::ruifrok_fixed;
    double lambda = 0.0;     // sparsity weight (vahadane only)
    std::uint64_t seed = 0;  // fit seed (vahadane only)
    bool converged = true;
};

// Standard H&E absorption vectors, columns normalized.
StainMatrix ruifrok_he_matrix();

// Angle between the two stain vectors; below ~1 degree the unmixing is
// ill-conditioned and the model counts as degenerate.
double stain_angle_deg(const StainMatrix& W);
inline constexpr double kMinStainAngleDeg = 1.0;

// A fitted model is degenerate when its columns have (nearly) collapsed onto
// one direction or when one stain carries essentially no concentration mass:
// both mean the two-stain factorization found no second stain.
bool stain_model_degenerate(const StainModel& m);

// Per-pixel concentrations c = pinv(W) * od, clamped at zero. Throws on a
// degenerate W.
Eigen::Matrix2Xd ruifrok_deconvolve(const ODImage& od, const StainMatrix& W);

// Non-negative least-squares concentrations via exact two-variable
// coordinate descent; lambda > 0 adds an L1 shrinkage on the concentrations.
Eigen::Matrix2Xd nnls_concentrations(const Eigen::Matrix3Xd& od, const StainMatrix& W,
                                     double lambda = 0.0);

// Unguarded coordinate-descent core behind nnls_concentrations. Tolerates
// near-collapsed stain pairs and can warm-start from a previous solution;
// every scalar update is an exact minimizer, so the subproblem objective
// never increases along the sweeps.
Eigen::Matrix2Xd cd_concentrations(const Eigen::Matrix3Xd& od, const StainMatrix& W, double lambda,
                                   const Eigen::Matrix2Xd* warm_start = nullptr);

// Nearest-rank 99th percentile per concentration row, over tissue pixels.
Eigen::Vector2d concentration_scale(const Eigen::Matrix2Xd& conc, const Eigen::ArrayXd& od_mag,
                                    double tissue_threshold = kTissueODThreshold);

// Fixed-matrix model of an image: fixed W, concentration percentiles fitted.
StainModel fit_ruifrok(const RGBImage& img);

struct NormalizeResult {
    RGBImage image;
    bool blank_input = false; // no tissue found, image returned unchanged
};

// Deconvolves with the fixed H&E matrix, rescales each concentration channel
// to the reference percentiles, recomposes. All-white inputs pass through
// with the warning flag set.
NormalizeResult ruifrok_normalize(const RGBImage& src, const StainModel& ref_model);

// Shared transform path: concentrations of src under src_model.W, rows
// rescaled to ref_model.conc_scale, recomposed through ref_model.W.
NormalizeResult stain_transfer(const RGBImage& src, const StainModel& src_model,
                               const StainModel& ref_model);

} // namespace nucrobust::stain
