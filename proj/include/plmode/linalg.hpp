#pragma once

// Small dense real matrices: determinant, adjugate, eigenvalues and the
// null vectors of rank-deficient matrices.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

namespace plmode::linalg {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using RowVec = Eigen::RowVectorXd;
using Complex = std::complex<double>;

class LinalgError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double det(const Mat& a);

/// Cofactor adjugate: adj(A) A = A adj(A) = det(A) I.
Mat adj(const Mat& a);

/// |det A| divided by the product of the column norms (Hadamard ratio).
double relative_det(const Mat& a);

struct RankOneAdjugate {
    double c = 0;         // adj(A) = c v u^T, from u^T adj(A) v
    double c_eigen = 0;   // product of the nonzero eigenvalues
    Vec v;                // A v = 0, e1^T v = 1 when possible
    RowVec u;             // u^T A = 0, u^T v = 1
    double sigma_min = 0;
    double sigma_next = 0;
};

/// Requires rank(A) = N - 1, decided with singular values against
/// 1e-8 times the largest.
RankOneAdjugate adj_rank_deficient(const Mat& a);

std::vector<Complex> eigs(const Mat& a);

struct EigPair {
    Complex value;
    Vec v;      // right eigenvector, e1^T v = 1
    RowVec u;   // left eigenvector, u^T v = 1
};

/// Real eigenvalue nearest target, which must be simple (no other eigenvalue
/// within simplicity_gap of it).
EigPair eig_pair_near(const Mat& a, double target, double simplicity_gap = 1e-6);

/// Eigenpair for the eigenvalue within 1e-6 of 1.
EigPair unit_eig_pair(const Mat& a);

/// Largest modulus among eigenvalues, excluding the one nearest 1.
double max_other_modulus(const std::vector<Complex>& ev);

Mat matrix_power(const Mat& a, int p);

}  // namespace plmode::linalg
