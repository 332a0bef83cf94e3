// SPDX-License-Identifier: Apache-2.0

#include "dcc/detect.hpp"

#include <Eigen/Dense>

#include "dcc/errors.hpp"
#include "dcc/kernels.hpp"

namespace dcc {
namespace {

using CMatrix = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                              Eigen::RowMajor>;

CMatrix to_eigen(const GeneratorMatrix& g) {
    return Eigen::Map<const CMatrix>(g.entries.data(), static_cast<Eigen::Index>(g.rows),
                                     static_cast<Eigen::Index>(g.cols));
}

std::vector<std::complex<double>> from_eigen(const CMatrix& m) {
    return {m.data(), m.data() + m.size()};
}

} // namespace

MlDetector::MlDetector(const GeneratorMatrix& g, const ModulationScheme& m)
    : codebook_(enumerate_codebook(g, m)), dim_(g.rows) {
    flat_.reserve(codebook_.size() * dim_);
    for (const CodebookEntry& e : codebook_) {
        flat_.insert(flat_.end(), e.codeword.begin(), e.codeword.end());
    }
}

Dataword MlDetector::detect(std::span<const std::complex<double>> y) const {
    if (y.size() != dim_) {
        throw DimensionMismatch("detect_ml: received vector length mismatch");
    }
    std::vector<double> dist(codebook_.size());
    kernels::sqdist_table(y.data(), flat_.data(), codebook_.size(), dim_, dist.data());
    return codebook_[kernels::argmin(dist.data(), dist.size())].dataword;
}

MmseDetector::MmseDetector(const GeneratorMatrix& g, const ModulationScheme& m, double n0)
    : m_(m), rows_(g.rows), cols_(g.cols) {
    if (!(n0 > 0.0)) {
        throw InvalidArgument("MMSE detection requires N0 > 0");
    }
    const CMatrix ge = to_eigen(g);
    CMatrix a = ge * ge.adjoint();
    a += n0 * CMatrix::Identity(a.rows(), a.cols());
    // a is Hermitian positive definite; check conditioning before solving.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    const auto& ev = es.eigenvalues();
    if (!(ev.minCoeff() > 0.0) || ev.maxCoeff() / ev.minCoeff() > 1e12) {
        throw NumericalSingularity("MMSE system condition number above 1e12");
    }
    // W = G^H A^-1 = (A^-1 G)^H since A is Hermitian.
    const CMatrix x = a.ldlt().solve(ge);
    const CMatrix w = x.adjoint();
    w_ = from_eigen(w);
}

Dataword MmseDetector::detect(std::span<const std::complex<double>> y) const {
    if (y.size() != rows_) {
        throw DimensionMismatch("detect_mmse: received vector length mismatch");
    }
    std::vector<std::complex<double>> s_hat(cols_);
    kernels::cmatvec(w_.data(), cols_, rows_, y.data(), s_hat.data());
    return slice(s_hat, m_);
}

ReducerDetector::ReducerDetector(const GeneratorMatrix& g, const ModulationScheme& m)
    : m_(m), rows_(g.rows), cols_(g.cols) {
    const CMatrix ge = to_eigen(g);
    Eigen::JacobiSVD<CMatrix> svd(ge, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || !(sv(sv.size() - 1) > 0.0) ||
        sv(0) / sv(sv.size() - 1) > 1e12) {
        throw RankDeficient("reducer requires a full-column-rank generator");
    }
    // Pseudo-inverse V S^-1 U^H.
    CMatrix w = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
    w_ = from_eigen(w);
}

Dataword ReducerDetector::detect(std::span<const std::complex<double>> y) const {
    if (y.size() != rows_) {
        throw DimensionMismatch("detect_reducer: received vector length mismatch");
    }
    std::vector<std::complex<double>> z(cols_);
    kernels::cmatvec(w_.data(), cols_, rows_, y.data(), z.data());
    return slice(z, m_);
}

Dataword detect_ml(const GeneratorMatrix& g, const ModulationScheme& m,
                   std::span<const std::complex<double>> y) {
    return MlDetector(g, m).detect(y);
}

Dataword detect_mmse(const GeneratorMatrix& g, const ModulationScheme& m,
                     std::span<const std::complex<double>> y, double n0) {
    return MmseDetector(g, m, n0).detect(y);
}

Dataword detect_reducer(const GeneratorMatrix& g, const ModulationScheme& m,
                        std::span<const std::complex<double>> y) {
    return ReducerDetector(g, m).detect(y);
}

} // namespace dcc
