// Dimension-agnostic pure-state engine: complex state vectors over labeled
// product bases, Hermitian observables, Born probabilities and projective
// post-selection. All types are dense, templated on the real scalar, and
// manipulated through free functions; Eigen is the only math dependency.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "popper/errors.hpp"

namespace popper {

using Index = Eigen::Index;

template <class Scalar>
using Complex = std::complex<Scalar>;
template <class Scalar>
using ComplexVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;
template <class Scalar>
using ComplexMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Tolerances. Exact algebra at 1e-12, accumulated sums at 1e-9; double
// precision is assumed throughout.
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kSumTol = 1e-9;
inline constexpr double kOrthoTol = 1e-10;
inline constexpr double kSpectrumTol = 1e-9;
inline constexpr double kNullSelectionTol = 1e-15;

namespace detail {

template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

// "+1", "0", "-1" for near-integer outcomes, shortest float form otherwise.
template <class Scalar>
std::string format_outcome(Scalar value) {
    const double v = static_cast<double>(value);
    const double r = std::round(v);
    if (std::abs(v - r) < 1e-9) {
        const auto n = static_cast<long long>(r);
        return n > 0 ? "+" + std::to_string(n) : std::to_string(n);
    }
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pure states over a product basis
// ---------------------------------------------------------------------------

/// Normalized complex amplitude vector over an ordered product basis.
///
/// Subsystems are laid out row-major: the flat index of the joint basis ket
/// (i_0, ..., i_{K-1}) is ((i_0 * d_1 + i_1) * d_2 + ...), i.e. the last
/// subsystem varies fastest. `labels[s]` holds the numeric outcome label of
/// each basis ket of subsystem s (e.g. +1, 0, -1 for a spin-1 z basis).
template <class Scalar = double>
struct PureState {
    std::vector<Index> dims;
    std::vector<RealVector<Scalar>> labels;
    ComplexVector<Scalar> amplitudes;

    Index dimension() const { return amplitudes.size(); }
    Index subsystems() const { return static_cast<Index>(dims.size()); }
};

template <class Scalar>
Index product_dimension(const std::vector<Index>& dims) {
    Index n = 1;
    for (Index d : dims) n *= d;
    return n;
}

/// Builds a validated state. Throws std::invalid_argument when the shape,
/// finiteness, or unit-norm invariants are violated.
template <class Scalar>
PureState<Scalar> make_state(std::vector<Index> dims,
                             std::vector<RealVector<Scalar>> labels,
                             ComplexVector<Scalar> amplitudes) {
    if (dims.empty()) throw std::invalid_argument("state needs at least one subsystem");
    for (Index d : dims)
        if (d < 1) throw std::invalid_argument("subsystem dimensions must be positive");
    if (labels.size() != dims.size())
        throw std::invalid_argument("one label vector per subsystem required");
    for (std::size_t s = 0; s < labels.size(); ++s)
        if (labels[s].size() != dims[s])
            throw std::invalid_argument("label count must match subsystem dimension");
    if (amplitudes.size() != product_dimension<Scalar>(dims))
        throw std::invalid_argument("amplitude vector length must equal product of dims");
    if (!detail::all_finite(amplitudes))
        throw std::invalid_argument("amplitudes must be finite");
    const Scalar n2 = amplitudes.squaredNorm();
    if (std::abs(static_cast<double>(n2) - 1.0) > kAlgebraTol)
        throw std::invalid_argument("state norm must be 1 within 1e-12");
    return PureState<Scalar>{std::move(dims), std::move(labels), std::move(amplitudes)};
}

/// Convenience: default labels 0..d-1 per subsystem.
template <class Scalar>
PureState<Scalar> make_state(std::vector<Index> dims, ComplexVector<Scalar> amplitudes) {
    std::vector<RealVector<Scalar>> labels;
    labels.reserve(dims.size());
    for (Index d : dims)
        labels.push_back(RealVector<Scalar>::LinSpaced(d, Scalar(0), Scalar(d - 1)));
    return make_state<Scalar>(std::move(dims), std::move(labels), std::move(amplitudes));
}

/// |1 - |<a|b>|| <= tol: equality of unit states up to a global phase.
template <class Scalar>
bool approx_equal_up_to_phase(const ComplexVector<Scalar>& a,
                              const ComplexVector<Scalar>& b,
                              double tol = kAlgebraTol) {
    if (a.size() != b.size()) return false;
    return std::abs(1.0 - static_cast<double>(std::abs(a.dot(b)))) <= tol;
}

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

/// Small dense Hermitian matrix; the factory enforces hermiticity at 1e-12.
template <class Scalar = double>
struct HermitianObservable {
    ComplexMatrix<Scalar> matrix;

    Index dim() const { return matrix.rows(); }
};

template <class Scalar>
HermitianObservable<Scalar> make_observable(ComplexMatrix<Scalar> matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() < 1)
        throw std::invalid_argument("observable must be a square matrix");
    if (!detail::all_finite(matrix))
        throw std::invalid_argument("observable entries must be finite");
    const double dev = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (dev > kAlgebraTol)
        throw std::invalid_argument("observable must equal its conjugate transpose within 1e-12");
    return HermitianObservable<Scalar>{std::move(matrix)};
}

template <class Scalar>
struct EigenPair {
    Scalar eigenvalue;
    ComplexVector<Scalar> eigenvector;
};

/// Eigen-decomposition with a fixed ordering and phase convention:
/// eigenvalues descending; each eigenvector scaled so its largest-magnitude
/// component (lowest index on ties) is real and positive.
template <class Scalar>
std::vector<EigenPair<Scalar>> eigenbasis(const HermitianObservable<Scalar>& obs) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(obs.matrix);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigendecomposition failed to converge for dim " +
                             std::to_string(obs.dim()));
    const Index n = obs.dim();
    std::vector<EigenPair<Scalar>> pairs;
    pairs.reserve(static_cast<std::size_t>(n));
    for (Index i = n - 1; i >= 0; --i) {  // solver sorts ascending
        ComplexVector<Scalar> v = solver.eigenvectors().col(i);
        Index pivot = 0;
        Scalar best = std::abs(v[0]);
        for (Index j = 1; j < n; ++j) {
            const Scalar mag = std::abs(v[j]);
            if (mag > best) {
                best = mag;
                pivot = j;
            }
        }
        v *= std::conj(v[pivot]) / best;  // rotate pivot component onto the positive real axis
        pairs.push_back({solver.eigenvalues()[i], std::move(v)});
    }
    return pairs;
}

// ---------------------------------------------------------------------------
// Outcome distributions
// ---------------------------------------------------------------------------

/// Labeled probability vector over detector outcomes. `outcomes` keeps the
/// numeric value behind each label (measurement eigenvalues, in the order
/// they were produced); `probs` is clamped non-negative and sums to 1
/// within 1e-9.
template <class Scalar = double>
struct OutcomeDistribution {
    std::vector<std::string> labels;
    RealVector<Scalar> outcomes;
    RealVector<Scalar> probs;

    Index size() const { return probs.size(); }

    /// Index of the outcome numerically closest to `value` (within tol).
    Index index_of(Scalar value, double tol = kSpectrumTol) const {
        for (Index i = 0; i < outcomes.size(); ++i)
            if (std::abs(static_cast<double>(outcomes[i] - value)) <= tol) return i;
        throw std::invalid_argument("no outcome labeled " + detail::format_outcome(value));
    }

    Scalar prob_of(Scalar value, double tol = kSpectrumTol) const {
        return probs[index_of(value, tol)];
    }
};

/// Validates and clamps: tiny negatives from rounding (>= -1e-12) become 0;
/// anything more negative, or a total off 1 by more than 1e-9, is an error.
/// No silent renormalization.
template <class Scalar>
OutcomeDistribution<Scalar> make_distribution(std::vector<std::string> labels,
                                              RealVector<Scalar> outcomes,
                                              RealVector<Scalar> probs) {
    if (static_cast<Index>(labels.size()) != probs.size() || outcomes.size() != probs.size())
        throw std::invalid_argument("labels, outcomes and probs must have equal length");
    if (!detail::all_finite(probs)) throw std::invalid_argument("probabilities must be finite");
    for (Index i = 0; i < probs.size(); ++i) {
        if (probs[i] < Scalar(-kAlgebraTol))
            throw std::invalid_argument("probability " + std::to_string(double(probs[i])) +
                                        " below -1e-12 at outcome " + labels[static_cast<std::size_t>(i)]);
        if (probs[i] < Scalar(0)) probs[i] = Scalar(0);
    }
    if (std::abs(static_cast<double>(probs.sum()) - 1.0) > kSumTol)
        throw std::invalid_argument("probabilities must sum to 1 within 1e-9");
    return OutcomeDistribution<Scalar>{std::move(labels), std::move(outcomes), std::move(probs)};
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Tensor product: dims concatenate, amplitude at (i, j) = a[i] * b[j].
template <class Scalar>
PureState<Scalar> tensor_product(const PureState<Scalar>& a, const PureState<Scalar>& b) {
    std::vector<Index> dims = a.dims;
    dims.insert(dims.end(), b.dims.begin(), b.dims.end());
    std::vector<RealVector<Scalar>> labels = a.labels;
    labels.insert(labels.end(), b.labels.begin(), b.labels.end());
    ComplexVector<Scalar> amps(a.dimension() * b.dimension());
    for (Index i = 0; i < a.dimension(); ++i)
        amps.segment(i * b.dimension(), b.dimension()) = a.amplitudes[i] * b.amplitudes;
    amps /= std::sqrt(amps.squaredNorm());
    return make_state<Scalar>(std::move(dims), std::move(labels), std::move(amps));
}

namespace detail {

template <class Scalar>
void check_subsystem(const PureState<Scalar>& state, Index subsystem,
                     const HermitianObservable<Scalar>& obs) {
    if (subsystem < 0 || subsystem >= state.subsystems())
        throw std::invalid_argument("subsystem index " + std::to_string(subsystem) +
                                    " out of range for " + std::to_string(state.subsystems()) +
                                    " subsystems");
    if (obs.dim() != state.dims[static_cast<std::size_t>(subsystem)])
        throw std::invalid_argument("observable dimension does not match subsystem dimension");
}

// Inner products <v|psi> over subsystem k, one per joint index of the other
// subsystems. outer = pre * stride + suf with stride = prod of dims after k.
template <class Scalar>
ComplexVector<Scalar> contract_subsystem(const PureState<Scalar>& state, Index subsystem,
                                         const ComplexVector<Scalar>& v) {
    const Index d = state.dims[static_cast<std::size_t>(subsystem)];
    Index stride = 1;
    for (std::size_t s = static_cast<std::size_t>(subsystem) + 1; s < state.dims.size(); ++s)
        stride *= state.dims[s];
    const Index rest = state.dimension() / d;
    ComplexVector<Scalar> inner(rest);
    for (Index outer = 0; outer < rest; ++outer) {
        const Index pre = outer / stride;
        const Index suf = outer % stride;
        const Index base = pre * d * stride + suf;
        Complex<Scalar> acc(0, 0);
        for (Index i = 0; i < d; ++i) acc += std::conj(v[i]) * state.amplitudes[base + i * stride];
        inner[outer] = acc;
    }
    return inner;
}

}  // namespace detail

/// Born-rule outcome distribution for measuring `obs` on one subsystem,
/// leaving the rest untouched. Outcomes are the eigenvalues, descending.
template <class Scalar>
OutcomeDistribution<Scalar> subsystem_probabilities(const PureState<Scalar>& state,
                                                    Index subsystem,
                                                    const HermitianObservable<Scalar>& obs) {
    detail::check_subsystem(state, subsystem, obs);
    const auto basis = eigenbasis(obs);
    RealVector<Scalar> outcomes(static_cast<Index>(basis.size()));
    RealVector<Scalar> probs(static_cast<Index>(basis.size()));
    std::vector<std::string> names;
    names.reserve(basis.size());
    for (std::size_t m = 0; m < basis.size(); ++m) {
        outcomes[static_cast<Index>(m)] = basis[m].eigenvalue;
        probs[static_cast<Index>(m)] =
            detail::contract_subsystem(state, subsystem, basis[m].eigenvector).squaredNorm();
        names.push_back(detail::format_outcome(basis[m].eigenvalue));
    }
    return make_distribution<Scalar>(std::move(names), std::move(outcomes), std::move(probs));
}

template <class Scalar>
struct PostSelection {
    Scalar probability;
    PureState<Scalar> conditional;
};

/// Projects one subsystem onto the eigenvector of `eigenvalue` and
/// renormalizes. The eigenvalue must lie in the spectrum within 1e-9; an
/// outcome of probability below 1e-15 has no conditional state and raises
/// NullSelectionError.
template <class Scalar>
PostSelection<Scalar> post_select(const PureState<Scalar>& state, Index subsystem,
                                  const HermitianObservable<Scalar>& obs, Scalar eigenvalue) {
    detail::check_subsystem(state, subsystem, obs);
    const auto basis = eigenbasis(obs);
    const EigenPair<Scalar>* match = nullptr;
    for (const auto& pair : basis) {
        if (std::abs(static_cast<double>(pair.eigenvalue - eigenvalue)) <= kSpectrumTol) {
            match = &pair;
            break;
        }
    }
    if (!match)
        throw std::invalid_argument("eigenvalue " + detail::format_outcome(eigenvalue) +
                                    " not in the observable's spectrum");

    const Index d = obs.dim();
    Index stride = 1;
    for (std::size_t s = static_cast<std::size_t>(subsystem) + 1; s < state.dims.size(); ++s)
        stride *= state.dims[s];
    const ComplexVector<Scalar> inner = detail::contract_subsystem(state, subsystem, match->eigenvector);
    const Scalar probability = inner.squaredNorm();
    if (static_cast<double>(probability) < kNullSelectionTol)
        throw NullSelectionError("null selection: outcome " + detail::format_outcome(eigenvalue) +
                                 " has probability below 1e-15");

    ComplexVector<Scalar> projected(state.dimension());
    for (Index outer = 0; outer < inner.size(); ++outer) {
        const Index pre = outer / stride;
        const Index suf = outer % stride;
        const Index base = pre * d * stride + suf;
        for (Index i = 0; i < d; ++i)
            projected[base + i * stride] = inner[outer] * match->eigenvector[i];
    }
    projected /= std::sqrt(projected.squaredNorm());
    return {probability, make_state<Scalar>(state.dims, state.labels, std::move(projected))};
}

using PureStateD = PureState<double>;
using HermitianObservableD = HermitianObservable<double>;
using OutcomeDistributionD = OutcomeDistribution<double>;

}  // namespace popper
