// Shared helpers for the test suites: conversions between Eigen containers
// and the plain-vector oracle types, plus seeded random generators.
#pragma once

#include <complex>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "popper/quantum.hpp"

namespace testsupport {

inline oracle::cvec to_cvec(const popper::ComplexVector<double>& v) {
    oracle::cvec out(static_cast<std::size_t>(v.size()));
    for (popper::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v[i];
    return out;
}

inline oracle::cmat to_cmat(const popper::ComplexMatrix<double>& m) {
    oracle::cmat out(static_cast<std::size_t>(m.rows()),
                     oracle::cvec(static_cast<std::size_t>(m.cols())));
    for (popper::Index i = 0; i < m.rows(); ++i)
        for (popper::Index j = 0; j < m.cols(); ++j)
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return out;
}

inline popper::ComplexVector<double> random_unit_vector(popper::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    popper::ComplexVector<double> v(dim);
    for (popper::Index i = 0; i < dim; ++i) v[i] = {gauss(rng), gauss(rng)};
    v /= std::sqrt(v.squaredNorm());
    return v;
}

inline popper::PureState<double> random_state(std::vector<popper::Index> dims,
                                              std::mt19937_64& rng) {
    const popper::Index n = popper::product_dimension<double>(dims);
    return popper::make_state<double>(std::move(dims), random_unit_vector(n, rng));
}

inline popper::HermitianObservable<double> random_hermitian(popper::Index dim,
                                                            std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    popper::ComplexMatrix<double> a(dim, dim);
    for (popper::Index i = 0; i < dim; ++i)
        for (popper::Index j = 0; j < dim; ++j) a(i, j) = {gauss(rng), gauss(rng)};
    popper::ComplexMatrix<double> h = (a + a.adjoint()) / 2.0;
    return popper::make_observable<double>(std::move(h));
}

inline std::vector<std::size_t> to_size_dims(const std::vector<popper::Index>& dims) {
    std::vector<std::size_t> out;
    out.reserve(dims.size());
    for (auto d : dims) out.push_back(static_cast<std::size_t>(d));
    return out;
}

}  // namespace testsupport
