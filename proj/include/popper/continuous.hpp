// Continuous entangled-pair engine: a two-scale Gaussian wavefunction on a
// rectangular grid, slit conditioning on particle 1, discrete-Fourier
// momentum statistics of particle 2, and free-particle propagation.
//
// Conventions (hbar = m = 1): grid points y_i = -extent + i*dy, i < n, with
// dy = 2*extent/n; the conjugate momentum grid is k_j = 2*pi*j'/(n*dy) with
// j' the signed DFT frequency. Densities integrate to 1 under the rectangle
// rule; moments are direct sums over grid densities.
#pragma once

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <optional>
#include <string>

#include "popper/errors.hpp"
#include "popper/quantum.hpp"

namespace popper {

inline constexpr Index kMinGridSize = 16;
inline constexpr Index kMaxGridSize = 1024;       // memory cap for the 2D grids
inline constexpr double kNyquistMargin = 5.0;     // pi/dy must exceed this times the momentum scale
inline constexpr double kBoundaryTailTol = 1e-8;  // max boundary |psi|^2 relative to peak

// ---------------------------------------------------------------------------
// Grids and distributions
// ---------------------------------------------------------------------------

template <class Scalar = double>
struct GridSpec {
    Index n1 = 512, n2 = 512;
    Scalar extent1 = Scalar(10), extent2 = Scalar(10);  // half-widths

    Scalar dy1() const { return Scalar(2) * extent1 / Scalar(n1); }
    Scalar dy2() const { return Scalar(2) * extent2 / Scalar(n2); }

    RealVector<Scalar> axis1() const {
        return RealVector<Scalar>::LinSpaced(n1, -extent1, extent1 - dy1());
    }
    RealVector<Scalar> axis2() const {
        return RealVector<Scalar>::LinSpaced(n2, -extent2, extent2 - dy2());
    }
};

template <class Scalar>
void validate(const GridSpec<Scalar>& grid) {
    if (grid.n1 < kMinGridSize || grid.n2 < kMinGridSize)
        throw ConfigError("grid sizes must be at least 16");
    if (grid.n1 > kMaxGridSize || grid.n2 > kMaxGridSize)
        throw ConfigError("grid sizes are capped at 1024");
    if (!(grid.extent1 > Scalar(0)) || !(grid.extent2 > Scalar(0)))
        throw ConfigError("grid extents must be positive");
}

/// Discretized two-particle wavefunction psi(y1, y2); rows index y1.
/// Normalized so that sum |psi|^2 dy1 dy2 = 1.
template <class Scalar = double>
struct WavefunctionGrid2D {
    GridSpec<Scalar> grid;
    ComplexMatrix<Scalar> values;
};

template <class Scalar>
Scalar total_probability(const WavefunctionGrid2D<Scalar>& state) {
    return state.values.squaredNorm() * state.grid.dy1() * state.grid.dy2();
}

/// Probability density sampled on a uniform grid.
template <class Scalar = double>
struct GridDistribution {
    RealVector<Scalar> points;
    RealVector<Scalar> density;
    Scalar step = Scalar(1);

    Scalar total() const { return density.sum() * step; }
    Scalar mean() const { return points.cwiseProduct(density).sum() * step / total(); }
    Scalar variance() const {
        const Scalar mu = mean();
        return (points.array() - mu).square().matrix().cwiseProduct(density).sum() * step / total();
    }
    Scalar stddev() const { return std::sqrt(variance()); }
};

// ---------------------------------------------------------------------------
// Apertures and configuration
// ---------------------------------------------------------------------------

enum class SlitEdge { hard, soft };

template <class Scalar = double>
struct SlitAperture {
    Scalar center = Scalar(0);
    Scalar width = Scalar(1);
    SlitEdge edge = SlitEdge::hard;
    Scalar smoothing_length = Scalar(0);  // soft edges only
};

template <class Scalar>
void validate(const SlitAperture<Scalar>& slit) {
    if (!(slit.width > Scalar(0))) throw ConfigError("slit width must be positive");
    if (slit.edge == SlitEdge::soft) {
        if (!(slit.smoothing_length > Scalar(0)))
            throw ConfigError("soft slit edges need a positive smoothing length");
        if (!(slit.smoothing_length < slit.width / Scalar(2)))
            throw ConfigError("slit smoothing length must be below width/2");
    }
}

/// Transmission amplitude of the aperture at each sample point: an indicator
/// for hard edges, an erf-smoothed indicator for soft ones.
template <class Scalar>
RealVector<Scalar> aperture_amplitude(const SlitAperture<Scalar>& slit,
                                      const RealVector<Scalar>& points) {
    validate(slit);
    const Scalar lo = slit.center - slit.width / Scalar(2);
    const Scalar hi = slit.center + slit.width / Scalar(2);
    RealVector<Scalar> mask(points.size());
    if (slit.edge == SlitEdge::hard) {
        for (Index i = 0; i < points.size(); ++i)
            mask[i] = (points[i] >= lo && points[i] <= hi) ? Scalar(1) : Scalar(0);
    } else {
        const Scalar s = slit.smoothing_length * std::sqrt(Scalar(2));
        for (Index i = 0; i < points.size(); ++i)
            mask[i] = (std::erf((points[i] - lo) / s) - std::erf((points[i] - hi) / s)) / Scalar(2);
    }
    return mask;
}

/// sigma_plus / sigma_minus are the position spreads of the (y1 +/- y2)/sqrt2
/// normal modes; equal spreads give a separable product state.
template <class Scalar = double>
struct ContinuousConfig {
    GridSpec<Scalar> grid;
    Scalar sigma_plus = Scalar(1);
    Scalar sigma_minus = Scalar(1);
    SlitAperture<Scalar> slit;
    std::optional<Scalar> evolve_time;
};

template <class Scalar>
void validate(const ContinuousConfig<Scalar>& cfg) {
    validate(cfg.grid);
    if (!(cfg.sigma_minus > Scalar(0)))
        throw ConfigError("sigma_minus must be positive");
    if (!(cfg.sigma_plus >= cfg.sigma_minus))
        throw ConfigError("sigma_plus must be >= sigma_minus");
    validate(cfg.slit);
    if (cfg.evolve_time && !std::isfinite(static_cast<double>(*cfg.evolve_time)))
        throw ConfigError("evolve_time must be finite");
}

/// Per-particle momentum stddev of the pair state (both particles share it).
template <class Scalar>
Scalar momentum_scale(Scalar sigma_plus, Scalar sigma_minus) {
    return std::sqrt(Scalar(1) / (sigma_plus * sigma_plus) +
                     Scalar(1) / (sigma_minus * sigma_minus)) /
           (Scalar(2) * std::sqrt(Scalar(2)));
}

/// Grid comfortably resolving the pair state: extent at 5x the marginal
/// position spread scale, which also clears the Nyquist margin at n = 512.
template <class Scalar>
GridSpec<Scalar> suggested_grid(Scalar sigma_plus, Scalar sigma_minus, Index n = 512,
                                Scalar extent_factor = Scalar(5)) {
    const Scalar extent = extent_factor * std::hypot(sigma_plus, sigma_minus);
    return GridSpec<Scalar>{n, n, extent, extent};
}

// ---------------------------------------------------------------------------
// DFT helpers
// ---------------------------------------------------------------------------

namespace detail {

// Signed DFT frequency of bin j for an n-point transform.
inline Index signed_bin(Index j, Index n) { return j < (n + 1) / 2 ? j : j - n; }

template <class Scalar>
RealVector<Scalar> momentum_axis_fft_order(Index n, Scalar dy) {
    RealVector<Scalar> k(n);
    const Scalar base = Scalar(2) * Scalar(M_PI) / (Scalar(n) * dy);
    for (Index j = 0; j < n; ++j) k[j] = base * Scalar(signed_bin(j, n));
    return k;
}

// Transform along the second axis (each row) or the first one (each column).
template <class Scalar>
ComplexMatrix<Scalar> dft_axis2(const ComplexMatrix<Scalar>& m, bool inverse) {
    Eigen::FFT<Scalar> fft;
    ComplexMatrix<Scalar> out(m.rows(), m.cols());
    ComplexVector<Scalar> in(m.cols()), res(m.cols());
    for (Index i = 0; i < m.rows(); ++i) {
        in = m.row(i).transpose();
        if (inverse)
            fft.inv(res, in);
        else
            fft.fwd(res, in);
        out.row(i) = res.transpose();
    }
    return out;
}

template <class Scalar>
ComplexMatrix<Scalar> dft_axis1(const ComplexMatrix<Scalar>& m, bool inverse) {
    Eigen::FFT<Scalar> fft;
    ComplexMatrix<Scalar> out(m.rows(), m.cols());
    ComplexVector<Scalar> in(m.rows()), res(m.rows());
    for (Index j = 0; j < m.cols(); ++j) {
        in = m.col(j);
        if (inverse)
            fft.inv(res, in);
        else
            fft.fwd(res, in);
        out.col(j) = res;
    }
    return out;
}

// Reorder an fft-ordered density onto the ascending momentum axis.
template <class Scalar>
GridDistribution<Scalar> shift_to_ascending(const RealVector<Scalar>& density_fft_order,
                                            Index n, Scalar dy) {
    const Scalar dk = Scalar(2) * Scalar(M_PI) / (Scalar(n) * dy);
    const Index shift = (n + 1) / 2;
    GridDistribution<Scalar> dist;
    dist.step = dk;
    dist.points.resize(n);
    dist.density.resize(n);
    for (Index a = 0; a < n; ++a) {
        const Index j = (a + shift) % n;
        dist.points[a] = dk * Scalar(signed_bin(j, n));
        dist.density[a] = density_fft_order[j];
    }
    return dist;
}

template <class Scalar>
Scalar boundary_density_ratio(const ComplexMatrix<Scalar>& values) {
    const Scalar peak = values.cwiseAbs2().maxCoeff();
    Scalar edge = values.row(0).cwiseAbs2().maxCoeff();
    edge = std::max(edge, values.row(values.rows() - 1).cwiseAbs2().maxCoeff());
    edge = std::max(edge, values.col(0).cwiseAbs2().maxCoeff());
    edge = std::max(edge, values.col(values.cols() - 1).cwiseAbs2().maxCoeff());
    return edge / peak;
}

template <class Scalar>
void check_boundary_tails(const WavefunctionGrid2D<Scalar>& state, const std::string& when) {
    const Scalar ratio = boundary_density_ratio(state.values);
    if (static_cast<double>(ratio) > kBoundaryTailTol)
        throw ResolutionError(when + ": boundary density is " + std::to_string(double(ratio)) +
                              " of the peak (limit 1e-8); enlarge the grid extents");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Regularized entangled pair psi proportional to
/// exp(-(y1+y2)^2 / (8 sigma_plus^2)) * exp(-(y1-y2)^2 / (8 sigma_minus^2)),
/// normalized on the grid. Rejects grids whose Nyquist momentum is within
/// 5x of the state's momentum spread or whose boundary carries more than
/// 1e-8 of the peak density, suggesting a workable grid in the message.
template <class Scalar>
WavefunctionGrid2D<Scalar> build_epr_gaussian(const ContinuousConfig<Scalar>& cfg) {
    validate(cfg);
    const GridSpec<Scalar>& grid = cfg.grid;

    const Scalar p_scale = momentum_scale(cfg.sigma_plus, cfg.sigma_minus);
    const Scalar nyquist = Scalar(M_PI) / std::max(grid.dy1(), grid.dy2());
    if (!(nyquist > Scalar(kNyquistMargin) * p_scale)) {
        const auto better = suggested_grid(cfg.sigma_plus, cfg.sigma_minus);
        throw ResolutionError(
            "momentum grid too coarse: pi/dy = " + std::to_string(double(nyquist)) +
            " does not exceed 5x the momentum scale " + std::to_string(double(p_scale)) +
            "; try n1 = n2 = " + std::to_string(better.n1) +
            " with extents " + std::to_string(double(better.extent1)));
    }

    const RealVector<Scalar> y1 = grid.axis1();
    const RealVector<Scalar> y2 = grid.axis2();
    const Scalar cp = Scalar(1) / (Scalar(8) * cfg.sigma_plus * cfg.sigma_plus);
    const Scalar cm = Scalar(1) / (Scalar(8) * cfg.sigma_minus * cfg.sigma_minus);

    WavefunctionGrid2D<Scalar> state{grid, ComplexMatrix<Scalar>(grid.n1, grid.n2)};
    for (Index i = 0; i < grid.n1; ++i) {
        for (Index j = 0; j < grid.n2; ++j) {
            const Scalar plus = y1[i] + y2[j];
            const Scalar minus = y1[i] - y2[j];
            state.values(i, j) = std::exp(-cp * plus * plus - cm * minus * minus);
        }
    }
    state.values /= std::sqrt(total_probability(state));
    detail::check_boundary_tails(state, "initial state does not fit the grid");
    return state;
}

/// Momentum distribution of one particle (0 = y1 axis, 1 = y2 axis):
/// DFT along that axis, squared magnitudes integrated over the other
/// particle, on the ascending momentum grid. Total probability is preserved
/// (Parseval).
template <class Scalar>
GridDistribution<Scalar> momentum_marginal(const WavefunctionGrid2D<Scalar>& state,
                                           Index particle) {
    const Scalar dy1 = state.grid.dy1();
    const Scalar dy2 = state.grid.dy2();
    if (particle == 0) {
        const ComplexMatrix<Scalar> f = detail::dft_axis1(state.values, false);
        const RealVector<Scalar> density =
            f.cwiseAbs2().rowwise().sum() * (dy1 * dy1 * dy2 / (Scalar(2) * Scalar(M_PI)));
        return detail::shift_to_ascending(density, state.grid.n1, dy1);
    }
    if (particle == 1) {
        const ComplexMatrix<Scalar> f = detail::dft_axis2(state.values, false);
        const RealVector<Scalar> density =
            f.cwiseAbs2().colwise().sum().transpose() *
            (dy2 * dy2 * dy1 / (Scalar(2) * Scalar(M_PI)));
        return detail::shift_to_ascending(density, state.grid.n2, dy2);
    }
    throw std::invalid_argument("particle index must be 0 or 1");
}

/// Position distribution of one particle, the other integrated out.
template <class Scalar>
GridDistribution<Scalar> position_marginal(const WavefunctionGrid2D<Scalar>& state,
                                           Index particle) {
    GridDistribution<Scalar> dist;
    if (particle == 0) {
        dist.points = state.grid.axis1();
        dist.density = state.values.cwiseAbs2().rowwise().sum() * state.grid.dy2();
        dist.step = state.grid.dy1();
    } else if (particle == 1) {
        dist.points = state.grid.axis2();
        dist.density = state.values.cwiseAbs2().colwise().sum().transpose() * state.grid.dy1();
        dist.step = state.grid.dy2();
    } else {
        throw std::invalid_argument("particle index must be 0 or 1");
    }
    return dist;
}

template <class Scalar = double>
struct SlitSelection {
    Scalar pass_probability;
    WavefunctionGrid2D<Scalar> conditional;
};

/// Multiplies the particle-1 axis by the aperture amplitude and renormalizes.
/// The pass probability is the squared norm before renormalization.
template <class Scalar>
SlitSelection<Scalar> apply_slit(const WavefunctionGrid2D<Scalar>& state,
                                 const SlitAperture<Scalar>& slit) {
    const RealVector<Scalar> mask = aperture_amplitude(slit, state.grid.axis1());
    WavefunctionGrid2D<Scalar> conditional{state.grid,
                                           mask.template cast<Complex<Scalar>>().asDiagonal() *
                                               state.values};
    const Scalar pass = total_probability(conditional);
    if (static_cast<double>(pass) < 1e-12)
        throw NullSelectionError("null selection: slit pass probability below 1e-12");
    conditional.values /= std::sqrt(pass);
    return {pass, std::move(conditional)};
}

/// Free-particle propagation by the Fourier kernel exp(-i (k1^2 + k2^2) t / 2).
/// Unitary: norm and both momentum marginals are preserved.
template <class Scalar>
WavefunctionGrid2D<Scalar> free_evolve(const WavefunctionGrid2D<Scalar>& state, Scalar t) {
    const RealVector<Scalar> k1 =
        detail::momentum_axis_fft_order(state.grid.n1, state.grid.dy1());
    const RealVector<Scalar> k2 =
        detail::momentum_axis_fft_order(state.grid.n2, state.grid.dy2());

    ComplexMatrix<Scalar> spectrum =
        detail::dft_axis1(detail::dft_axis2(state.values, false), false);
    for (Index i = 0; i < state.grid.n1; ++i)
        for (Index j = 0; j < state.grid.n2; ++j)
            spectrum(i, j) *= std::polar(Scalar(1), -(k1[i] * k1[i] + k2[j] * k2[j]) * t / Scalar(2));

    WavefunctionGrid2D<Scalar> evolved{
        state.grid, detail::dft_axis2(detail::dft_axis1(spectrum, true), true)};
    detail::check_boundary_tails(evolved, "evolved state does not fit the grid");
    return evolved;
}

/// Selection probability, particle-2 momentum statistics before and after
/// conditioning on the slit, and the conditioned particle-2 position
/// statistics.
template <class Scalar = double>
struct SpreadReport {
    Scalar pass_probability;
    GridDistribution<Scalar> unconditional_p2;
    GridDistribution<Scalar> conditional_p2;
    GridDistribution<Scalar> conditional_y2;
};

/// The full continuous protocol: build the pair, record the unconditional
/// particle-2 momentum distribution, condition on the slit, optionally
/// evolve freely, and record the conditional statistics.
template <class Scalar>
SpreadReport<Scalar> run_popper_continuous(const ContinuousConfig<Scalar>& cfg) {
    const auto state = build_epr_gaussian(cfg);
    SpreadReport<Scalar> report;
    report.unconditional_p2 = momentum_marginal(state, 1);

    auto selection = apply_slit(state, cfg.slit);
    report.pass_probability = selection.pass_probability;
    WavefunctionGrid2D<Scalar> conditioned = std::move(selection.conditional);
    if (cfg.evolve_time) conditioned = free_evolve(conditioned, *cfg.evolve_time);

    report.conditional_p2 = momentum_marginal(conditioned, 1);
    report.conditional_y2 = position_marginal(conditioned, 1);
    return report;
}

using GridSpecD = GridSpec<double>;
using WavefunctionGrid2DD = WavefunctionGrid2D<double>;
using ContinuousConfigD = ContinuousConfig<double>;
using SpreadReportD = SpreadReport<double>;

}  // namespace popper
