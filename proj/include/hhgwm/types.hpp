#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Core>

namespace hhgwm {

using real = double;
using cplx = std::complex<double>;

template <class T, int M = Eigen::Dynamic, int N = Eigen::Dynamic>
using matrix = Eigen::Matrix<T, M, N>;

template <class T, int M = Eigen::Dynamic>
using vector = matrix<T, M, 1>;

using vec = vector<real>;
using cvec = vector<cplx>;
using mat = matrix<real>;
using cvec3 = vector<cplx, 3>;
using cvec4 = vector<cplx, 4>;
using cmat3 = matrix<cplx, 3, 3>;
using cmat4 = matrix<cplx, 4, 4>;

inline constexpr real pi = std::numbers::pi;
inline constexpr real two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

}  // namespace hhgwm
