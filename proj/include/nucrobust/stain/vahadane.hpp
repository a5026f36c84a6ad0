#pragma once

#include <cstdint>
#include <vector>

#include "nucrobust/stain/model.hpp"
#include "nucrobust/stain/plausibility.hpp"

namespace nucrobust::stain {

struct VahadaneParams {
    double lambda = 0.1;       // sparsity weight on the concentrations
    int max_iters = 200;
    double tol = 1e-6;         // relative objective decrease for convergence
    std::uint64_t seed = 1;
    int max_pixels = 50000;    // tissue subsample cap for the factorization
    int min_tissue = 100;
    double tissue_threshold = kTissueODThreshold;
};

struct VahadaneFit {
    StainModel model;
    std::vector<double> objective; // one value per outer iteration
};

// Sparse two-stain NMF of the tissue OD pixels:
//   min ||V - W H||_F^2 + lambda * sum(H)   s.t.  W, H >= 0, ||W_col|| = 1.
// H is solved exactly per pixel by coordinate descent, W by a backtracking
// projected gradient step that never increases the objective. Deterministic
// for a fixed seed. Throws when fewer than min_tissue stained pixels exist;
// hitting max_iters only clears model.converged.
VahadaneFit vahadane_fit(const RGBImage& img, const VahadaneParams& params = {});

struct VahadaneResult {
    RGBImage image;
    PlausibilityVerdict verdict;
};

// Fits both images, moves the source concentrations onto the reference
// percentiles and recomposes through the reference stain vectors. Degenerate
// fits short-circuit to the unshifted source with an implausible verdict.
VahadaneResult vahadane_normalize(const RGBImage& src, const RGBImage& ref,
                                  const VahadaneParams& params = {});

} // namespace nucrobust::stain
