// The two-spin experiment end to end: entangled pair preparation, the
// plain z measurement on the right-hand particle, and coincidence counting
// against the central x outcome of the left-hand particle.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "popper/errors.hpp"
#include "popper/quantum.hpp"
#include "popper/sampling.hpp"
#include "popper/spin1.hpp"

namespace popper {

/// Pair amplitudes: alpha on the anti-correlated branches, beta on the
/// central one, with 2 alpha^2 + beta^2 = 1. `shots` > 0 additionally
/// samples detector clicks from the exact distributions.
template <class Scalar = double>
struct DiscreteConfig {
    Scalar alpha = Scalar(0);
    Scalar beta = Scalar(1);
    std::int64_t shots = 0;
    std::uint64_t seed = 0;
};

template <class Scalar>
void validate(const DiscreteConfig<Scalar>& cfg) {
    if (!(cfg.alpha >= Scalar(0)) || !(cfg.beta >= Scalar(0)))
        throw ConfigError("alpha and beta must be non-negative");
    const double total = 2.0 * double(cfg.alpha) * double(cfg.alpha) +
                         double(cfg.beta) * double(cfg.beta);
    if (std::abs(total - 1.0) > kSumTol)
        throw ConfigError("2*alpha^2 + beta^2 must equal 1 within 1e-9 (got " +
                          std::to_string(total) + ")");
    if (cfg.shots < 0) throw ConfigError("shots must be non-negative");
}

/// alpha |+1,-1> + beta |0,0> + alpha |-1,+1> over the two z bases.
template <class Scalar>
PureState<Scalar> build_state(const DiscreteConfig<Scalar>& cfg) {
    validate(cfg);
    ComplexVector<Scalar> amps = ComplexVector<Scalar>::Zero(9);
    amps[0 * 3 + 2] = cfg.alpha;
    amps[1 * 3 + 1] = cfg.beta;
    amps[2 * 3 + 0] = cfg.alpha;
    return make_state<Scalar>({3, 3}, {spin1_labels<Scalar>(), spin1_labels<Scalar>()},
                              std::move(amps));
}

namespace detail {

// z outcomes (+1, 0, -1) map onto the detector row (D+, D0, D-).
template <class Scalar>
OutcomeDistribution<Scalar> to_detector_row(OutcomeDistribution<Scalar> dist) {
    dist.labels = {"D+", "D0", "D-"};
    return dist;
}

inline std::uint64_t conditional_stream(std::uint64_t seed) {
    return seed ^ 0x9e3779b97f4a7c15ull;  // disjoint deterministic stream
}

}  // namespace detail

/// z distribution of the right-hand particle with no apparatus on the left.
template <class Scalar>
OutcomeDistribution<Scalar> run_unconditional(const DiscreteConfig<Scalar>& cfg) {
    const auto psi = build_state(cfg);
    return detail::to_detector_row(
        subsystem_probabilities(psi, 1, spin1_observable<Scalar>(SpinAxis::z)));
}

struct DiscreteCounts {
    CountTable unconditional;
    CountTable conditional;
};

/// Exact probabilities always; sampled counts only when shots > 0.
template <class Scalar = double>
struct DiscreteReport {
    OutcomeDistribution<Scalar> unconditional;
    Scalar selection_probability = Scalar(0);
    Scalar discarded_probability = Scalar(0);  // aggregate of the unselected x outcomes
    OutcomeDistribution<Scalar> conditional;
    std::optional<DiscreteCounts> counts;
};

/// Coincidence protocol: project the left-hand particle onto the central
/// x outcome, then read out the right-hand z distribution. alpha = 0 never
/// fires the selection and raises NullSelectionError.
template <class Scalar>
DiscreteReport<Scalar> run_coincidence(const DiscreteConfig<Scalar>& cfg) {
    const auto psi = build_state(cfg);
    const auto z_obs = spin1_observable<Scalar>(SpinAxis::z);

    DiscreteReport<Scalar> report;
    report.unconditional = detail::to_detector_row(subsystem_probabilities(psi, 1, z_obs));

    const auto sel = post_select(psi, 0, spin1_observable<Scalar>(SpinAxis::x), Scalar(0));
    report.selection_probability = sel.probability;
    report.discarded_probability = Scalar(1) - sel.probability;
    report.conditional = detail::to_detector_row(subsystem_probabilities(sel.conditional, 1, z_obs));

    if (cfg.shots > 0) {
        report.counts = DiscreteCounts{
            sample_counts(report.unconditional, cfg.shots, cfg.seed),
            sample_counts(report.conditional, cfg.shots, detail::conditional_stream(cfg.seed))};
    }
    return report;
}

/// One row of the x-basis rewrite: the (unnormalized) partner amplitudes
/// attached to each x outcome of the left-hand particle.
template <class Scalar = double>
struct XBasisBranch {
    Scalar x_eigenvalue;
    ComplexVector<Scalar> partner_amplitudes;  // over the z basis (+1, 0, -1)

    Scalar weight() const { return partner_amplitudes.squaredNorm(); }
};

template <class Scalar = double>
struct XBasisDecomposition {
    std::vector<XBasisBranch<Scalar>> branches;  // x eigenvalue descending

    /// Rebuilds the joint state from the branch table.
    PureState<Scalar> reassemble() const {
        const ComplexMatrix<Scalar> u = z_to_x_overlaps<Scalar>();
        ComplexVector<Scalar> amps = ComplexVector<Scalar>::Zero(9);
        for (Index m = 0; m < 3; ++m) {
            const auto& branch = branches[static_cast<std::size_t>(m)];
            for (Index i = 0; i < 3; ++i)
                for (Index j = 0; j < 3; ++j)
                    amps[i * 3 + j] += std::conj(u(m, i)) * branch.partner_amplitudes[j];
        }
        return make_state<Scalar>({3, 3}, {spin1_labels<Scalar>(), spin1_labels<Scalar>()},
                                  std::move(amps));
    }
};

/// Rewrites the pair state over the left-hand x eigenbasis. With amplitudes
/// arranged as the 3x3 matrix A(m', j), the branch rows are U * A.
template <class Scalar>
XBasisDecomposition<Scalar> decompose_x_basis(const DiscreteConfig<Scalar>& cfg) {
    const auto psi = build_state(cfg);
    ComplexMatrix<Scalar> amp(3, 3);
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j) amp(i, j) = psi.amplitudes[i * 3 + j];
    const ComplexMatrix<Scalar> branches = z_to_x_overlaps<Scalar>() * amp;

    XBasisDecomposition<Scalar> out;
    const RealVector<Scalar> labels = spin1_labels<Scalar>();
    for (Index m = 0; m < 3; ++m)
        out.branches.push_back({labels[m], branches.row(m).transpose()});
    return out;
}

using DiscreteConfigD = DiscreteConfig<double>;
using DiscreteReportD = DiscreteReport<double>;

}  // namespace popper
