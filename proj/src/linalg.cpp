#include "aar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace aar {

std::vector<cplx> eigenvalues(const Mat& A)
{
    Eigen::EigenSolver<Mat> es(A, false);
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](const cplx& a, const cplx& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return ev;
}

double spectral_abscissa(const Mat& A)
{
    double m = -INFINITY;
    for (const auto& e : eigenvalues(A))
        m = std::max(m, e.real());
    return m;
}

std::vector<cplx> uncontrollable_modes(const Mat& A, const Mat& B, double tol)
{
    const Eigen::Index n = A.rows();
    const double scale = std::max(1.0, std::max(A.norm(), B.norm()));
    std::vector<cplx> bad;
    for (const auto& s : eigenvalues(A)) {
        if (s.real() < -tol)
            continue;
        Eigen::MatrixXcd pbh(n, n + B.cols());
        pbh.leftCols(n) = A.cast<cplx>() - s * Eigen::MatrixXcd::Identity(n, n);
        pbh.rightCols(B.cols()) = B.cast<cplx>();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pbh);
        if (svd.singularValues()(n - 1) < 1e-8 * scale)
            bad.push_back(s);
    }
    return bad;
}

Mat solve_lyapunov(const Mat& A, const Mat& Q)
{
    const Eigen::Index n = A.rows();
    const Mat I = Mat::Identity(n, n);
    // vec(A^T X + X A) = (I kron A^T + A^T kron I) vec(X)
    Mat K = Mat::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            K.block(i * n, j * n, n, n) += I(i, j) * A.transpose();
            K.block(i * n, j * n, n, n) += A(j, i) * I;
        }
    const Vec q = -Eigen::Map<const Vec>(Mat(Q).data(), n * n);
    Eigen::FullPivLU<Mat> lu(K);
    if (!lu.isInvertible())
        throw Error(ErrorKind::SolverFailure, "Lyapunov operator is singular");
    Vec x = lu.solve(q);
    Mat X = Eigen::Map<Mat>(x.data(), n, n);
    return 0.5 * (X + X.transpose());
}

bool is_symmetric(const Mat& M, double tol)
{
    return M.rows() == M.cols() && (M - M.transpose()).norm() <= tol * std::max(1.0, M.norm());
}

bool is_positive_semidefinite(const Mat& M, double tol)
{
    if (!is_symmetric(M))
        return false;
    Eigen::SelfAdjointEigenSolver<Mat> es(M);
    return es.eigenvalues().minCoeff() >= -tol * std::max(1.0, M.norm());
}

bool is_positive_definite(const Mat& M)
{
    if (!is_symmetric(M))
        return false;
    Eigen::LLT<Mat> llt(M);
    return llt.info() == Eigen::Success;
}

std::string format_eigenvalues(const std::vector<cplx>& ev)
{
    std::string s;
    char buf[64];
    for (const auto& e : ev) {
        if (!s.empty())
            s += ", ";
        if (e.imag() == 0.0)
            std::snprintf(buf, sizeof buf, "%.6g", e.real());
        else
            std::snprintf(buf, sizeof buf, "%.6g%+.6gi", e.real(), e.imag());
        s += buf;
    }
    return s;
}

}  // namespace aar
