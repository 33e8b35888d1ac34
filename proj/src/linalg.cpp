#include "plmode/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace plmode::linalg {

double det(const Mat& a) {
    if (a.rows() != a.cols()) throw LinalgError("det of non-square matrix");
    if (a.rows() == 0) return 1.0;
    return a.partialPivLu().determinant();
}

Mat adj(const Mat& a) {
    const Eigen::Index n = a.rows();
    if (n != a.cols()) throw LinalgError("adj of non-square matrix");
    Mat out(n, n);
    if (n == 1) {
        out(0, 0) = 1.0;
        return out;
    }
    Mat minor(n - 1, n - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            // minor with row j and column i removed gives adj(i, j)
            for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
                if (r == j) continue;
                for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor(rr, cc++) = a(r, c);
                }
                ++rr;
            }
            const double m = n - 1 == 1 ? minor(0, 0) : det(minor);
            out(i, j) = ((i + j) % 2 ? -1.0 : 1.0) * m;
        }
    }
    return out;
}

double relative_det(const Mat& a) {
    double scale = 1.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        const double nrm = a.col(j).norm();
        if (nrm == 0) return 0.0;
        scale *= nrm;
    }
    return std::fabs(det(a)) / scale;
}

std::vector<Complex> eigs(const Mat& a) {
    Eigen::EigenSolver<Mat> es(a, false);
    if (es.info() != Eigen::Success) throw LinalgError("eigenvalue iteration did not converge");
    std::vector<Complex> out(es.eigenvalues().begin(), es.eigenvalues().end());
    return out;
}

RankOneAdjugate adj_rank_deficient(const Mat& a) {
    const Eigen::Index n = a.rows();
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec& s = svd.singularValues();
    const double tol = 1e-8 * s(0);
    RankOneAdjugate r;
    r.sigma_min = s(n - 1);
    r.sigma_next = n >= 2 ? s(n - 2) : s(0);
    if (!(r.sigma_min <= tol) || (n >= 2 && !(r.sigma_next > tol)))
        throw LinalgError("rank is not N-1: smallest singular values " + std::to_string(r.sigma_min) +
                          " and " + std::to_string(r.sigma_next));
    r.v = svd.matrixV().col(n - 1);
    r.u = svd.matrixU().col(n - 1).transpose();
    if (std::fabs(r.v(0)) > 1e-8 * r.v.norm()) r.v /= r.v(0);
    const double uv = r.u.dot(r.v);
    if (std::fabs(uv) < 1e-12 * r.u.norm() * r.v.norm())
        throw LinalgError("left and right null vectors are orthogonal");
    r.u /= uv;
    r.c = (r.u * adj(a) * r.v)(0, 0);

    std::vector<Complex> ev = eigs(a);
    auto smallest = std::min_element(ev.begin(), ev.end(),
                                     [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
    Complex prod = 1.0;
    for (auto it = ev.begin(); it != ev.end(); ++it)
        if (it != smallest) prod *= *it;
    r.c_eigen = prod.real();
    return r;
}

EigPair eig_pair_near(const Mat& a, double target, double simplicity_gap) {
    const Eigen::Index n = a.rows();
    std::vector<Complex> ev = eigs(a);
    std::size_t best = 0;
    for (std::size_t i = 1; i < ev.size(); ++i)
        if (std::abs(ev[i] - target) < std::abs(ev[best] - target)) best = i;
    for (std::size_t i = 0; i < ev.size(); ++i)
        if (i != best && std::abs(ev[i] - ev[best]) < simplicity_gap)
            throw LinalgError("eigenvalue near " + std::to_string(target) + " is not simple");
    if (std::fabs(ev[best].imag()) > 1e-10 * std::max(1.0, std::abs(ev[best])))
        throw LinalgError("eigenvalue nearest " + std::to_string(target) + " is not real");
    const double lam = ev[best].real();

    Mat shifted = a - lam * Mat::Identity(n, n);
    Eigen::JacobiSVD<Mat> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
    EigPair p;
    p.value = lam;
    p.v = svd.matrixV().col(n - 1);
    p.u = svd.matrixU().col(n - 1).transpose();
    if (std::fabs(p.v(0)) < 1e-8 * p.v.norm())
        throw LinalgError("right eigenvector is orthogonal to e1; cannot normalise e1^T v = 1");
    p.v /= p.v(0);
    const double uv = p.u.dot(p.v);
    if (std::fabs(uv) < 1e-12 * p.u.norm() * p.v.norm())
        throw LinalgError("left and right eigenvectors are orthogonal");
    p.u /= uv;
    return p;
}

EigPair unit_eig_pair(const Mat& a) {
    EigPair p = eig_pair_near(a, 1.0);
    if (std::abs(p.value - 1.0) > 1e-6) throw LinalgError("no eigenvalue within 1e-6 of 1");
    return p;
}

double max_other_modulus(const std::vector<Complex>& ev) {
    std::size_t unit = 0;
    for (std::size_t i = 1; i < ev.size(); ++i)
        if (std::abs(ev[i] - 1.0) < std::abs(ev[unit] - 1.0)) unit = i;
    double best = 0;
    for (std::size_t i = 0; i < ev.size(); ++i)
        if (i != unit) best = std::max(best, std::abs(ev[i]));
    return best;
}

Mat matrix_power(const Mat& a, int p) {
    if (p < 0) throw LinalgError("negative matrix power");
    Mat r = Mat::Identity(a.rows(), a.cols());
    for (int i = 0; i < p; ++i) r = a * r;
    return r;
}

}  // namespace plmode::linalg
