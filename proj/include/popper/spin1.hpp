// Spin-1 specifics: x/z component observables (hbar = 1, spectrum {+1,0,-1})
// and the z->x change of basis.
#pragma once

#include <cmath>
#include <stdexcept>

#include "popper/quantum.hpp"

namespace popper {

enum class SpinAxis { x, z };

/// Standard spin-1 matrices in the z basis ordered (+1, 0, -1):
///   z -> diag(1, 0, -1),  x -> (1/sqrt 2) [[0,1,0],[1,0,1],[0,1,0]].
template <class Scalar = double>
HermitianObservable<Scalar> spin1_observable(SpinAxis axis) {
    ComplexMatrix<Scalar> m = ComplexMatrix<Scalar>::Zero(3, 3);
    switch (axis) {
        case SpinAxis::z:
            m(0, 0) = Scalar(1);
            m(2, 2) = Scalar(-1);
            break;
        case SpinAxis::x: {
            const Scalar inv_sqrt2 = Scalar(1) / std::sqrt(Scalar(2));
            m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = inv_sqrt2;
            break;
        }
        default:
            throw std::invalid_argument("unsupported spin axis");
    }
    return make_observable<Scalar>(std::move(m));
}

/// Outcome labels (+1, 0, -1) shared by both spin-1 observables.
template <class Scalar = double>
RealVector<Scalar> spin1_labels() {
    RealVector<Scalar> l(3);
    l << Scalar(1), Scalar(0), Scalar(-1);
    return l;
}

/// Overlap table U(m, m') = <x; m | z; m'> with rows and columns ordered by
/// descending eigenvalue. Unitary within 1e-12; the eigenvector phase
/// convention of `eigenbasis` fixes all signs.
template <class Scalar = double>
ComplexMatrix<Scalar> z_to_x_overlaps() {
    const auto x_basis = eigenbasis(spin1_observable<Scalar>(SpinAxis::x));
    ComplexMatrix<Scalar> u(3, 3);
    for (Index m = 0; m < 3; ++m)
        u.row(m) = x_basis[static_cast<std::size_t>(m)].eigenvector.conjugate().transpose();
    return u;
}

}  // namespace popper
