#pragma once

#include <span>
#include <vector>

#include "survfilter/diffusion_model.hpp"
#include "survfilter/marginal_quantization.hpp"

namespace survfilter {

enum class KernelChoice { gaussian, lognormal };

// Result of the forward recursion over the observation segment.
//
// survival_weights and likelihood_weights live on the terminal marginal grid
// and are unnormalized up to the common factor exp(log_scale) removed step by
// step; only their ratio enters the posterior, so the rescaling is exact.
// posterior[i] = survival_weights[i] / sum_j likelihood_weights[j], and
// sum(posterior) estimates the probability of staying above the barrier up to
// the observation horizon.
struct FilterState {
    std::vector<double> survival_weights;    // barrier-augmented (g * G chain)
    std::vector<double> likelihood_weights;  // likelihood only (g chain)
    double log_scale = 0.0;
    std::vector<double> posterior;

    double survival_to_obs_horizon() const;
};

// Forward recursion: starting from unit mass at the initial singleton, applies
// per step the quantized transition weighted by the observation kernel, with
// (survival branch only) the no-crossing bridge factor between consecutive
// grid nodes. Both vectors are rescaled by the same factor after each step.
//
// obs must hold m+1 values on the quantization grid times. The lognormal
// kernel requires the gbm preset. Throws FilterDegenerate when all likelihood
// mass underflows.
FilterState filter_recursion(const MarginalQuantization& mq, std::span<const double> obs,
                             const DiffusionModel& model, double barrier, KernelChoice kernel);

}  // namespace survfilter
