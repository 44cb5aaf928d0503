#pragma once

#include "aar/core.hpp"

#include <complex>
#include <string>
#include <vector>

namespace aar {

using cplx = std::complex<double>;

std::vector<cplx> eigenvalues(const Mat& A);
double spectral_abscissa(const Mat& A);

// Eigenvalues of A with Re >= -tol that fail the PBH rank test on [A - sI, B].
std::vector<cplx> uncontrollable_modes(const Mat& A, const Mat& B, double tol = 1e-9);

// Solves A^T X + X A + Q = 0 through the Kronecker form.
Mat solve_lyapunov(const Mat& A, const Mat& Q);

bool is_symmetric(const Mat& M, double tol = 1e-12);
bool is_positive_semidefinite(const Mat& M, double tol = 1e-12);
bool is_positive_definite(const Mat& M);

std::string format_eigenvalues(const std::vector<cplx>& ev);

}  // namespace aar
