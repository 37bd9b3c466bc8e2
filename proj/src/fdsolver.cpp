#include "kronschro/fdsolver.hpp"

#include <stdexcept>

namespace kronschro {

CoeffTensor SpatialEigenbasis::to_eigen(const CoeffTensor& X) const {
    CoeffTensor Y = X;
    for (std::size_t l = 0; l < axes.size(); ++l) {
        const Eigen::MatrixXd Ut = axes[l].U.transpose();
        Y = mode_product(Y, Ut, static_cast<int>(l) + 1);
    }
    return Y;
}

CoeffTensor SpatialEigenbasis::from_eigen(const CoeffTensor& X) const {
    CoeffTensor Y = X;
    for (std::size_t l = 0; l < axes.size(); ++l)
        Y = mode_product(Y, axes[l].U, static_cast<int>(l) + 1);
    return Y;
}

SpatialEigenbasis spatial_eigenbasis(const SpaceTimeProblem& prob,
                                     const UnivariateSet& u) {
    SpatialEigenbasis b;
    b.dims = prob.reduced_dims();
    for (int l = 0; l < prob.d; ++l)
        b.axes.push_back(generalized_sym_eig(u.L[l], u.M[l]));
    // composite eigenvalues in spatial vec order (axis 1 fastest)
    b.lambda.assign(static_cast<std::size_t>(prob.N_s()), 0.0);
    std::vector<int> idx(prob.d, 0);
    for (std::size_t i = 0; i < b.lambda.size(); ++i) {
        double s = 0;
        for (int l = 0; l < prob.d; ++l)
            s += b.axes[l].lambda[idx[l]];
        b.lambda[i] = s;
        for (int l = 0; l < prob.d; ++l) {
            if (++idx[l] < b.dims[l + 1])
                break;
            idx[l] = 0;
        }
    }
    return b;
}

FastDiagSolver::FastDiagSolver(SpatialEigenbasis basis, const BlockBuilder& build)
    : basis_(std::move(basis)) {
    blocks_.reserve(basis_.lambda.size());
    for (double lam : basis_.lambda)
        blocks_.push_back(factor_banded(build(lam)));
}

void FastDiagSolver::solve(const cplx* r, cplx* y) const {
    CoeffTensor X;
    X.dims = basis_.dims;
    X.v.assign(r, r + vec_size());
    X = basis_.to_eigen(X);
    const std::size_t nt = static_cast<std::size_t>(basis_.dims[0]);
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        solve_banded(blocks_[i], X.v.data() + i * nt);
    X = basis_.from_eigen(X);
    std::copy(X.v.begin(), X.v.end(), y);
}

void FastDiagSolver::solve_adjoint(const cplx* r, cplx* y) const {
    CoeffTensor X;
    X.dims = basis_.dims;
    X.v.assign(r, r + vec_size());
    X = basis_.to_eigen(X);
    const std::size_t nt = static_cast<std::size_t>(basis_.dims[0]);
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        solve_banded_adjoint(blocks_[i], X.v.data() + i * nt);
    X = basis_.from_eigen(X);
    std::copy(X.v.begin(), X.v.end(), y);
}

std::vector<cplx> FastDiagSolver::solve(const std::vector<cplx>& r) const {
    if (r.size() != vec_size())
        throw std::invalid_argument("FastDiagSolver: vector length mismatch");
    std::vector<cplx> y(r.size());
    solve(r.data(), y.data());
    return y;
}

std::vector<cplx> FastDiagSolver::solve_adjoint(const std::vector<cplx>& r) const {
    if (r.size() != vec_size())
        throw std::invalid_argument("FastDiagSolver: vector length mismatch");
    std::vector<cplx> y(r.size());
    solve_adjoint(r.data(), y.data());
    return y;
}

namespace {

BandedMatrix<cplx> symmetrized_w(const BandedMatrix<cplx>& W) {
    BandedMatrix<cplx> S = W;
    const BandedMatrix<cplx> Wh = W.conjugate_transpose();
    for (int i = 0; i < W.rows(); ++i)
        for (int j = std::max(0, i - W.bandwidth());
             j <= std::min(W.cols() - 1, i + W.bandwidth()); ++j)
            S.ref(i, j) += Wh(i, j);
    return S;
}

FastDiagSolver make_fd_solver(const SpaceTimeProblem& prob, const UnivariateSet& u) {
    const double nu = prob.nu;
    const BandedMatrix<cplx> Lt = to_complex(u.Lt);
    const BandedMatrix<cplx> Mt = to_complex(u.Mt);
    const BandedMatrix<cplx> Wsym = symmetrized_w(u.Wt);
    auto build = [&](double lam) {
        BandedMatrix<cplx> H(Lt.rows(), Lt.bandwidth());
        for (int i = 0; i < H.rows(); ++i)
            for (int j = std::max(0, i - H.bandwidth());
                 j <= std::min(H.cols() - 1, i + H.bandwidth()); ++j)
                H.ref(i, j) = Lt(i, j) + nu * nu * lam * lam * Mt(i, j) +
                              nu * lam * Wsym(i, j);
        return H;
    };
    return FastDiagSolver(spatial_eigenbasis(prob, u), build);
}

} // namespace

FDPreconditioner::FDPreconditioner(const SpaceTimeProblem& prob,
                                   const UnivariateSet& u)
    : solver_(make_fd_solver(prob, u)) {}

FDPreconditioner::FDPreconditioner(const SpaceTimeProblem& prob)
    : FDPreconditioner(prob, build_univariate(prob)) {}

std::vector<cplx> FDPreconditioner::apply(const std::vector<cplx>& r) const {
    return solver_.solve(r);
}

Eigen::MatrixXcd FDPreconditioner::to_dense(const SpaceTimeProblem& prob,
                                            std::size_t cap) const {
    const UnivariateSet u = build_univariate(prob);
    if (vec_size() > cap)
        throw std::length_error("FDPreconditioner::to_dense: size cap exceeded");
    auto kron = [](const Eigen::MatrixXcd& C, const Eigen::MatrixXcd& D) {
        Eigen::MatrixXcd K(C.rows() * D.rows(), C.cols() * D.cols());
        for (int i = 0; i < C.rows(); ++i)
            for (int j = 0; j < C.cols(); ++j)
                K.block(i * D.rows(), j * D.cols(), D.rows(), D.cols()) =
                    C(i, j) * D;
        return K;
    };
    const int d = prob.d;
    std::vector<Eigen::MatrixXcd> M(d), L(d);
    for (int l = 0; l < d; ++l) {
        M[l] = u.M[l].to_dense().cast<cplx>();
        L[l] = u.L[l].to_dense().cast<cplx>();
    }
    // spatial kron with axis 1 fastest: acc_l = kron(J_d, ..., J_1)
    auto spatial = [&](const std::vector<Eigen::MatrixXcd>& J) {
        Eigen::MatrixXcd acc = J[0];
        for (int l = 1; l < d; ++l)
            acc = kron(J[l], acc);
        return acc;
    };
    const Eigen::MatrixXcd Ms = spatial(M);
    Eigen::MatrixXcd Ls = Eigen::MatrixXcd::Zero(Ms.rows(), Ms.cols());
    for (int l = 0; l < d; ++l) {
        std::vector<Eigen::MatrixXcd> J = M;
        J[l] = L[l];
        Ls += spatial(J);
    }
    const Eigen::MatrixXcd Bhat = Ls * Ms.llt().solve(Ls);
    const Eigen::MatrixXcd Lt = u.Lt.to_dense().cast<cplx>();
    const Eigen::MatrixXcd Mt = u.Mt.to_dense().cast<cplx>();
    const Eigen::MatrixXcd W = u.Wt.to_dense();
    const Eigen::MatrixXcd Wsym = W + W.adjoint();
    const double nu = prob.nu;
    return kron(Ms, Lt) + nu * nu * kron(Bhat, Mt) + nu * kron(Ls, Wsym);
}

FastDiagSolver galerkin_fast_solver(const SpaceTimeProblem& prob,
                                    const UnivariateSet& u) {
    const double nu = prob.nu;
    const BandedMatrix<cplx> Mt = to_complex(u.Mt);
    const BandedMatrix<cplx>& Wt = u.Wt;
    auto build = [&](double lam) {
        BandedMatrix<cplx> H(Wt.rows(), Wt.bandwidth());
        for (int i = 0; i < H.rows(); ++i)
            for (int j = std::max(0, i - H.bandwidth());
                 j <= std::min(H.cols() - 1, i + H.bandwidth()); ++j)
                H.ref(i, j) = Wt(i, j) + nu * lam * Mt(i, j);
        return H;
    };
    return FastDiagSolver(spatial_eigenbasis(prob, u), build);
}

} // namespace kronschro
