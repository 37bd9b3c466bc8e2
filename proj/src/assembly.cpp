#include "kronschro/assembly.hpp"

#include <cmath>
#include <stdexcept>

#include "kronschro/kernels.hpp"

namespace kronschro {

namespace {

// continuity of the spline space: p - max interior multiplicity
int continuity(const KnotVector& kv) {
    const auto& k = kv.knots();
    const int p = kv.degree();
    int maxmult = 0;
    for (std::size_t i = p + 1; i + p + 1 < k.size();) {
        std::size_t j = i;
        while (j < k.size() && k[j] == k[i])
            ++j;
        maxmult = std::max(maxmult, static_cast<int>(j - i));
        i = j;
    }
    return p - maxmult;
}

struct KindSpec {
    int row_order;
    int col_order;
    cplx scale;
};

KindSpec kind_spec(MatKind kind) {
    switch (kind) {
    case MatKind::Mass: return {0, 0, cplx(1, 0)};
    case MatKind::Stiffness: return {1, 1, cplx(1, 0)};
    case MatKind::SecondCross: return {2, 0, cplx(1, 0)};
    case MatKind::Bilaplacian: return {2, 2, cplx(1, 0)};
    case MatKind::TimeDeriv: return {0, 1, cplx(0, 1)};
    }
    throw std::logic_error("kind_spec: unreachable");
}

BandedMatrix<cplx> restricted(const BandedMatrix<cplx>& a, Restriction r) {
    switch (r) {
    case Restriction::None: return a;
    case Restriction::DropFirst: return a.restricted(1, a.rows());
    case Restriction::DropLast: return a.restricted(0, a.rows() - 1);
    case Restriction::DropBoth: return a.restricted(1, a.rows() - 1);
    }
    throw std::logic_error("restricted: unreachable");
}

} // namespace

BandedMatrix<cplx> univariate_matrix(MatKind kind, const KnotVector& kv,
                                     Restriction r) {
    const KindSpec spec = kind_spec(kind);
    const int p = kv.degree();
    const int maxorder = std::max(spec.row_order, spec.col_order);
    if (maxorder >= 2 && (p < 2 || continuity(kv) < 1))
        throw std::invalid_argument(
            "univariate_matrix: second derivatives require a C^1 space");
    const int m = kv.dim();
    BandedMatrix<cplx> A(m, p);
    const QuadratureRule q = element_quadrature(kv, p + 1);
    for (std::size_t k = 0; k < q.nodes.size(); ++k) {
        const BasisValues bv = eval_basis(kv, q.nodes[k], maxorder);
        const double w = q.weights[k];
        for (int a = 0; a <= p; ++a)
            for (int b = 0; b <= p; ++b)
                A.add(bv.first + a, bv.first + b,
                      spec.scale * (w * bv.d(spec.row_order, a) * bv.d(spec.col_order, b)));
    }
    return restricted(A, r);
}

BandedMatrix<double> univariate_matrix_real(MatKind kind, const KnotVector& kv,
                                            Restriction r) {
    if (kind == MatKind::TimeDeriv)
        throw std::invalid_argument("univariate_matrix_real: W is complex");
    const BandedMatrix<cplx> A = univariate_matrix(kind, kv, r);
    BandedMatrix<double> R(A.rows(), A.bandwidth());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = std::max(0, i - A.bandwidth());
             j <= std::min(A.cols() - 1, i + A.bandwidth()); ++j)
            R.ref(i, j) = A(i, j).real();
    return R;
}

SpaceTimeProblem::SpaceTimeProblem(int d_, double T_, double nu_, KnotVector tkv,
                                   std::vector<KnotVector> skv, TrialSpace trial_)
    : d(d_), T(T_), nu(nu_), trial(trial_), time_kv(std::move(tkv)),
      space_kv(std::move(skv)) {
    if (d < 1 || d > 3)
        throw std::invalid_argument("SpaceTimeProblem: d must be 1, 2 or 3");
    if (!(T > 0) || !(nu > 0))
        throw std::invalid_argument("SpaceTimeProblem: T and nu must be positive");
    if (static_cast<int>(space_kv.size()) != d)
        throw std::invalid_argument("SpaceTimeProblem: need d spatial knot vectors");
    if (time_kv.degree() < 1)
        throw std::invalid_argument("SpaceTimeProblem: p_t >= 1 required");
    for (const auto& kv : space_kv) {
        if (kv.degree() < 2 || continuity(kv) < 1)
            throw std::invalid_argument(
                "SpaceTimeProblem: spatial spaces must be C^1 with p_s >= 2");
    }
}

SpaceTimeProblem SpaceTimeProblem::uniform(int d, int p, int n_el, int n_el_time,
                                           double T, double nu, TrialSpace trial) {
    std::vector<KnotVector> skv;
    for (int l = 0; l < d; ++l)
        skv.push_back(KnotVector::open_uniform(p, n_el, 0.0, 1.0));
    return SpaceTimeProblem(d, T, nu, KnotVector::open_uniform(p, n_el_time, 0.0, T),
                            std::move(skv), trial);
}

SpaceTimeProblem SpaceTimeProblem::matched(int d, int p, int n_el, double T,
                                           double nu, TrialSpace trial) {
    const int n_el_time = std::max(1, static_cast<int>(std::lround(n_el * T)));
    return uniform(d, p, n_el, n_el_time, T, nu, trial);
}

long SpaceTimeProblem::N_s() const {
    long n = 1;
    for (int l = 0; l < d; ++l)
        n *= n_s(l);
    return n;
}

std::vector<int> SpaceTimeProblem::reduced_dims() const {
    std::vector<int> dims{n_t()};
    for (int l = 0; l < d; ++l)
        dims.push_back(n_s(l));
    return dims;
}

std::vector<int> SpaceTimeProblem::full_dims() const {
    std::vector<int> dims{time_kv.dim()};
    for (const auto& kv : space_kv)
        dims.push_back(kv.dim());
    return dims;
}

UnivariateSet build_univariate(const SpaceTimeProblem& prob) {
    UnivariateSet u;
    const Restriction rt = prob.time_restriction();
    u.Lt = univariate_matrix_real(MatKind::Stiffness, prob.time_kv, rt);
    u.Mt = univariate_matrix_real(MatKind::Mass, prob.time_kv, rt);
    u.Wt = univariate_matrix(MatKind::TimeDeriv, prob.time_kv, rt);
    for (int l = 0; l < prob.d; ++l) {
        const auto& kv = prob.space_kv[l];
        u.M.push_back(univariate_matrix_real(MatKind::Mass, kv, Restriction::DropBoth));
        u.L.push_back(univariate_matrix_real(MatKind::Stiffness, kv, Restriction::DropBoth));
        u.G.push_back(univariate_matrix_real(MatKind::SecondCross, kv, Restriction::DropBoth));
        u.V.push_back(univariate_matrix_real(MatKind::Bilaplacian, kv, Restriction::DropBoth));
    }
    return u;
}

namespace {

using OptFactor = std::optional<BandedMatrix<cplx>>;

struct FactorSet {
    BandedMatrix<cplx> Lt, Mt, Wsym; // time: stiffness, mass, W + W^*
    std::vector<BandedMatrix<cplx>> M, L, G, Gt, V;
};

FactorSet complex_factors(const SpaceTimeProblem& prob, Restriction rt,
                          Restriction rs) {
    FactorSet f;
    f.Lt = univariate_matrix(MatKind::Stiffness, prob.time_kv, rt);
    f.Mt = univariate_matrix(MatKind::Mass, prob.time_kv, rt);
    const BandedMatrix<cplx> W = univariate_matrix(MatKind::TimeDeriv, prob.time_kv, rt);
    const BandedMatrix<cplx> Wh = W.conjugate_transpose();
    f.Wsym = W;
    for (int i = 0; i < W.rows(); ++i)
        for (int j = std::max(0, i - W.bandwidth());
             j <= std::min(W.cols() - 1, i + W.bandwidth()); ++j)
            f.Wsym.ref(i, j) += Wh(i, j);
    for (int l = 0; l < prob.d; ++l) {
        const auto& kv = prob.space_kv[l];
        f.M.push_back(univariate_matrix(MatKind::Mass, kv, rs));
        f.L.push_back(univariate_matrix(MatKind::Stiffness, kv, rs));
        f.G.push_back(univariate_matrix(MatKind::SecondCross, kv, rs));
        f.Gt.push_back(f.G.back().transpose());
        f.V.push_back(univariate_matrix(MatKind::Bilaplacian, kv, rs));
    }
    return f;
}

std::vector<OptFactor> with_masses(const FactorSet& f, int d, OptFactor time_factor) {
    std::vector<OptFactor> factors(d + 1);
    factors[0] = std::move(time_factor);
    for (int l = 0; l < d; ++l)
        factors[l + 1] = f.M[l];
    return factors;
}

KroneckerOperator assemble_system(const SpaceTimeProblem& prob, Restriction rt,
                                  Restriction rs, const std::vector<int>& dims) {
    const FactorSet f = complex_factors(prob, rt, rs);
    const int d = prob.d;
    const double nu = prob.nu;
    KroneckerOperator A(dims);

    // M_s x L_t
    A.add_term(cplx(1, 0), with_masses(f, d, f.Lt));
    // nu^2 B_s x M_t: diagonal V blocks plus G x G^T cross blocks
    for (int l = 0; l < d; ++l) {
        auto factors = with_masses(f, d, f.Mt);
        factors[l + 1] = f.V[l];
        A.add_term(cplx(nu * nu, 0), std::move(factors));
    }
    for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m) {
            if (l == m)
                continue;
            auto factors = with_masses(f, d, f.Mt);
            factors[l + 1] = f.G[l];
            factors[m + 1] = f.Gt[m];
            A.add_term(cplx(nu * nu, 0), std::move(factors));
        }
    // coupling -nu [G^T x W^* + G x W]; on the Dirichlet space G = -L
    // and this collapses to nu L_s x (W_t + W_t^*), which keeps the
    // operator exactly Hermitian
    if (rs == Restriction::None) {
        const BandedMatrix<cplx> Wh =
            univariate_matrix(MatKind::TimeDeriv, prob.time_kv, rt)
                .conjugate_transpose();
        const BandedMatrix<cplx> W =
            univariate_matrix(MatKind::TimeDeriv, prob.time_kv, rt);
        for (int l = 0; l < d; ++l) {
            auto factors = with_masses(f, d, Wh);
            factors[l + 1] = f.Gt[l];
            A.add_term(cplx(-nu, 0), std::move(factors));
            factors = with_masses(f, d, W);
            factors[l + 1] = f.G[l];
            A.add_term(cplx(-nu, 0), std::move(factors));
        }
    } else {
        for (int l = 0; l < d; ++l) {
            auto factors = with_masses(f, d, f.Wsym);
            factors[l + 1] = f.L[l];
            A.add_term(cplx(nu, 0), std::move(factors));
        }
    }
    return A;
}

} // namespace

KroneckerOperator assemble_system_operator(const SpaceTimeProblem& prob) {
    return assemble_system(prob, prob.time_restriction(), Restriction::DropBoth,
                           prob.reduced_dims());
}

KroneckerOperator assemble_system_operator_full(const SpaceTimeProblem& prob) {
    return assemble_system(prob, Restriction::None, Restriction::None,
                           prob.full_dims());
}

KroneckerOperator assemble_spacetime_mass(const SpaceTimeProblem& prob) {
    const FactorSet f =
        complex_factors(prob, prob.time_restriction(), Restriction::DropBoth);
    KroneckerOperator M(prob.reduced_dims());
    M.add_term(cplx(1, 0), with_masses(f, prob.d, f.Mt));
    return M;
}

KroneckerOperator assemble_galerkin_operator(const SpaceTimeProblem& prob) {
    const FactorSet f =
        complex_factors(prob, prob.time_restriction(), Restriction::DropBoth);
    KroneckerOperator A(prob.reduced_dims());
    const BandedMatrix<cplx> W =
        univariate_matrix(MatKind::TimeDeriv, prob.time_kv, prob.time_restriction());
    A.add_term(cplx(1, 0), with_masses(f, prob.d, W));
    for (int l = 0; l < prob.d; ++l) {
        auto factors = with_masses(f, prob.d, f.Mt);
        factors[l + 1] = f.Gt[l];
        A.add_term(cplx(-prob.nu, 0), std::move(factors));
    }
    return A;
}

SparseRowMatrix basis_eval_matrix(const KnotVector& kv, std::span<const double> pts,
                                  int order) {
    SparseRowMatrix E;
    E.rows = static_cast<int>(pts.size());
    E.cols = kv.dim();
    E.nnz = kv.degree() + 1;
    E.offset.resize(E.rows);
    E.vals.assign(static_cast<std::size_t>(E.rows) * E.nnz, 0.0);
    for (int i = 0; i < E.rows; ++i) {
        const BasisValues bv = eval_basis(kv, pts[i], order);
        E.offset[i] = bv.first;
        for (int k = 0; k < E.nnz; ++k)
            E.vals[static_cast<std::size_t>(i) * E.nnz + k] = bv.d(order, k);
    }
    return E;
}

namespace {

SparseRowMatrix row_chunk(const SparseRowMatrix& E, int r0, int r1) {
    SparseRowMatrix c;
    c.rows = r1 - r0;
    c.cols = E.cols;
    c.nnz = E.nnz;
    c.offset.assign(E.offset.begin() + r0, E.offset.begin() + r1);
    c.vals.assign(E.vals.begin() + static_cast<std::size_t>(r0) * E.nnz,
                  E.vals.begin() + static_cast<std::size_t>(r1) * E.nnz);
    return c;
}

struct QuadGrid {
    std::vector<QuadratureRule> rules;                 // axis 0 = time
    std::vector<std::vector<SparseRowMatrix>> eval;    // eval[axis][order]
};

QuadGrid make_quad_grid(const SpaceTimeProblem& prob, int max_order) {
    QuadGrid g;
    auto add_axis = [&](const KnotVector& kv) {
        g.rules.push_back(element_quadrature(kv, kv.degree() + 1));
        std::vector<SparseRowMatrix> evals;
        for (int o = 0; o <= max_order; ++o)
            evals.push_back(basis_eval_matrix(kv, g.rules.back().nodes, o));
        g.eval.push_back(std::move(evals));
    };
    add_axis(prob.time_kv);
    for (const auto& kv : prob.space_kv)
        add_axis(kv);
    return g;
}

/// Weighted moment tensors int_Q f * D^orders(B_i) on the full spaces,
/// one tensor per order set; f is evaluated once per grid point.
std::vector<CoeffTensor> weighted_moments(const SpaceTimeProblem& prob,
                                          const QuadGrid& g, const SpaceTimeFn& f,
                                          const std::vector<std::vector<int>>& order_sets) {
    const int d = prob.d;
    const int last = d; // chunk along the outermost axis
    std::vector<CoeffTensor> out;
    for (std::size_t s = 0; s < order_sets.size(); ++s)
        out.emplace_back(prob.full_dims());

    std::vector<int> chunk_dims;
    for (int a = 0; a < last; ++a)
        chunk_dims.push_back(static_cast<int>(g.rules[a].nodes.size()));
    const int npts_last = g.rules[last].npts_per_element;
    const int q_last = static_cast<int>(g.rules[last].nodes.size());

    std::vector<double> x(d);
    for (int r0 = 0; r0 < q_last; r0 += npts_last) {
        const int r1 = std::min(q_last, r0 + npts_last);
        std::vector<int> dims = chunk_dims;
        dims.push_back(r1 - r0);
        CoeffTensor Fw(dims);
        std::vector<int> idx(d + 1, 0);
        for (std::size_t flat = 0; flat < Fw.size(); ++flat) {
            const double t = g.rules[0].nodes[idx[0]];
            double w = g.rules[0].weights[idx[0]];
            for (int l = 1; l < d; ++l) {
                x[l - 1] = g.rules[l].nodes[idx[l]];
                w *= g.rules[l].weights[idx[l]];
            }
            x[d - 1] = g.rules[last].nodes[r0 + idx[last]];
            w *= g.rules[last].weights[r0 + idx[last]];
            Fw.v[flat] = f(t, std::span<const double>(x)) * w;
            for (int a = 0; a <= last; ++a) {
                if (++idx[a] < dims[a])
                    break;
                idx[a] = 0;
            }
        }
        for (std::size_t s = 0; s < order_sets.size(); ++s) {
            CoeffTensor T = Fw;
            for (int a = 0; a < last; ++a)
                T = mode_product_transpose(T, g.eval[a][order_sets[s][a]], a);
            T = mode_product_transpose(
                T, row_chunk(g.eval[last][order_sets[s][last]], r0, r1), last);
            kernels::axpy(1.0, T.v.data(), out[s].v.data(), out[s].size());
        }
    }
    return out;
}

} // namespace

std::vector<cplx> assemble_rhs(const SpaceTimeProblem& prob, const SpaceTimeFn& f) {
    const int d = prob.d;
    const QuadGrid g = make_quad_grid(prob, 2);
    std::vector<std::vector<int>> order_sets;
    std::vector<int> dt(d + 1, 0);
    dt[0] = 1;
    order_sets.push_back(dt); // time derivative
    for (int l = 0; l < d; ++l) {
        std::vector<int> o(d + 1, 0);
        o[l + 1] = 2;
        order_sets.push_back(o);
    }
    const std::vector<CoeffTensor> mom = weighted_moments(prob, g, f, order_sets);
    CoeffTensor full(prob.full_dims());
    kernels::axpy(cplx(0, -1), mom[0].v.data(), full.v.data(), full.size());
    for (int l = 0; l < d; ++l)
        kernels::axpy(-prob.nu, mom[l + 1].v.data(), full.v.data(), full.size());
    return restrict_to_interior(prob, full.v);
}

bool is_constrained(const SpaceTimeProblem& prob, std::span<const int> full_idx) {
    const std::vector<int> fd = prob.full_dims();
    if (prob.trial == SpaceTimeProblem::TrialSpace::InitialCondition) {
        if (full_idx[0] == 0)
            return true;
    } else {
        if (full_idx[0] == fd[0] - 1)
            return true;
    }
    for (int l = 1; l <= prob.d; ++l)
        if (full_idx[l] == 0 || full_idx[l] == fd[l] - 1)
            return true;
    return false;
}

namespace {

// maps a reduced multi-index to the full one
void reduced_to_full(const SpaceTimeProblem& prob, const std::vector<int>& red,
                     std::vector<int>& full) {
    const bool init = prob.trial == SpaceTimeProblem::TrialSpace::InitialCondition;
    full[0] = red[0] + (init ? 1 : 0);
    for (int l = 1; l <= prob.d; ++l)
        full[l] = red[l] + 1;
}

std::size_t flat_index(const std::vector<int>& dims, const std::vector<int>& idx) {
    std::size_t f = 0, stride = 1;
    for (std::size_t a = 0; a < dims.size(); ++a) {
        f += stride * static_cast<std::size_t>(idx[a]);
        stride *= static_cast<std::size_t>(dims[a]);
    }
    return f;
}

} // namespace

std::vector<cplx> restrict_to_interior(const SpaceTimeProblem& prob,
                                       const std::vector<cplx>& full) {
    const std::vector<int> fd = prob.full_dims();
    const std::vector<int> rd = prob.reduced_dims();
    if (full.size() != CoeffTensor::total(fd))
        throw std::invalid_argument("restrict_to_interior: length mismatch");
    std::vector<cplx> red(CoeffTensor::total(rd));
    std::vector<int> ridx(rd.size(), 0), fidx(fd.size(), 0);
    for (std::size_t i = 0; i < red.size(); ++i) {
        reduced_to_full(prob, ridx, fidx);
        red[i] = full[flat_index(fd, fidx)];
        for (std::size_t a = 0; a < rd.size(); ++a) {
            if (++ridx[a] < rd[a])
                break;
            ridx[a] = 0;
        }
    }
    return red;
}

std::vector<cplx> extend_with_boundary(const SpaceTimeProblem& prob,
                                       const std::vector<cplx>& reduced,
                                       const std::vector<cplx>& boundary) {
    const std::vector<int> fd = prob.full_dims();
    const std::vector<int> rd = prob.reduced_dims();
    std::vector<cplx> full = boundary.empty()
                                 ? std::vector<cplx>(CoeffTensor::total(fd), cplx(0))
                                 : boundary;
    if (full.size() != CoeffTensor::total(fd))
        throw std::invalid_argument("extend_with_boundary: length mismatch");
    std::vector<int> ridx(rd.size(), 0), fidx(fd.size(), 0);
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        reduced_to_full(prob, ridx, fidx);
        full[flat_index(fd, fidx)] = reduced[i];
        for (std::size_t a = 0; a < rd.size(); ++a) {
            if (++ridx[a] < rd[a])
                break;
            ridx[a] = 0;
        }
    }
    return full;
}

CoeffTensor mode_solve(const CoeffTensor& X, const BandedFactorization& F, int axis) {
    const std::size_t s = X.stride(axis);
    const int nm = X.dims[axis];
    if (nm != F.n)
        throw std::invalid_argument("mode_solve: dimension mismatch");
    CoeffTensor Y = X;
    const std::size_t outer = X.size() / (s * static_cast<std::size_t>(nm));
    const std::size_t slab = s * static_cast<std::size_t>(nm);
    std::vector<cplx> fiber(nm);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t q = 0; q < s; ++q) {
            cplx* base = Y.v.data() + o * slab + q;
            for (int j = 0; j < nm; ++j)
                fiber[j] = base[static_cast<std::size_t>(j) * s];
            solve_banded(F, fiber.data());
            for (int j = 0; j < nm; ++j)
                base[static_cast<std::size_t>(j) * s] = fiber[j];
        }
    }
    return Y;
}

Lifting lift_nonhomogeneous(const SpaceTimeProblem& prob, const SpaceTimeFn& g,
                            const SpaceTimeFn& f) {
    const int d = prob.d;
    // sample g on the tensor Greville grid
    std::vector<std::vector<double>> grev;
    grev.push_back(prob.time_kv.greville());
    for (const auto& kv : prob.space_kv)
        grev.push_back(kv.greville());
    CoeffTensor S(prob.full_dims());
    std::vector<int> idx(d + 1, 0);
    std::vector<double> x(d);
    for (std::size_t flat = 0; flat < S.size(); ++flat) {
        for (int l = 0; l < d; ++l)
            x[l] = grev[l + 1][idx[l + 1]];
        S.v[flat] = g(grev[0][idx[0]], std::span<const double>(x));
        for (int a = 0; a <= d; ++a) {
            if (++idx[a] < S.dims[a])
                break;
            idx[a] = 0;
        }
    }
    // univariate collocation along every axis
    auto collocation = [](const KnotVector& kv, const std::vector<double>& pts) {
        BandedMatrix<cplx> C(kv.dim(), kv.degree());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const BasisValues bv = eval_basis(kv, pts[i], 0);
            for (int k = 0; k <= kv.degree(); ++k)
                if (C.in_band(static_cast<int>(i), bv.first + k))
                    C.ref(static_cast<int>(i), bv.first + k) = bv.d(0, k);
        }
        return factor_banded(C);
    };
    CoeffTensor coeffs = mode_solve(S, collocation(prob.time_kv, grev[0]), 0);
    for (int l = 0; l < d; ++l)
        coeffs = mode_solve(coeffs, collocation(prob.space_kv[l], grev[l + 1]), l + 1);

    Lifting lift;
    lift.boundary_coeffs.assign(coeffs.size(), cplx(0));
    std::fill(idx.begin(), idx.end(), 0);
    for (std::size_t flat = 0; flat < coeffs.size(); ++flat) {
        if (is_constrained(prob, idx))
            lift.boundary_coeffs[flat] = coeffs.v[flat];
        for (int a = 0; a <= d; ++a) {
            if (++idx[a] < coeffs.dims[a])
                break;
            idx[a] = 0;
        }
    }

    lift.corrected_rhs = assemble_rhs(prob, f);
    const KroneckerOperator A_full = assemble_system_operator_full(prob);
    const std::vector<cplx> corr = A_full.apply(lift.boundary_coeffs);
    const std::vector<cplx> corr_red = restrict_to_interior(prob, corr);
    kernels::axpy(-1.0, corr_red.data(), lift.corrected_rhs.data(),
                  lift.corrected_rhs.size());
    return lift;
}

std::pair<KroneckerOperator, std::vector<cplx>>
assemble_ultraweak(const SpaceTimeProblem& prob, const SpaceTimeFn& f,
                   const SpaceFn& u0) {
    if (prob.trial != SpaceTimeProblem::TrialSpace::FinalCondition)
        throw std::invalid_argument(
            "assemble_ultraweak: problem must use the final-condition space");
    KroneckerOperator A = assemble_system_operator(prob);
    std::vector<cplx> rhs = assemble_rhs(prob, f);

    // i (u0, B_i(.,0))_{L2(Omega)}: spatial moments times time-basis
    // values at t = 0
    const int d = prob.d;
    std::vector<QuadratureRule> rules;
    std::vector<SparseRowMatrix> evals;
    std::vector<int> qdims;
    for (const auto& kv : prob.space_kv) {
        rules.push_back(element_quadrature(kv, kv.degree() + 1));
        evals.push_back(basis_eval_matrix(kv, rules.back().nodes, 0));
        qdims.push_back(static_cast<int>(rules.back().nodes.size()));
    }
    CoeffTensor Fw(qdims);
    std::vector<int> idx(d, 0);
    std::vector<double> x(d);
    for (std::size_t flat = 0; flat < Fw.size(); ++flat) {
        double w = 1.0;
        for (int l = 0; l < d; ++l) {
            x[l] = rules[l].nodes[idx[l]];
            w *= rules[l].weights[idx[l]];
        }
        Fw.v[flat] = u0(std::span<const double>(x)) * w;
        for (int a = 0; a < d; ++a) {
            if (++idx[a] < qdims[a])
                break;
            idx[a] = 0;
        }
    }
    CoeffTensor mom = Fw;
    for (int l = 0; l < d; ++l)
        mom = mode_product_transpose(mom, evals[l], l);
    // drop boundary spatial indices
    std::vector<cplx> mom_red;
    mom_red.reserve(prob.N_s());
    std::vector<int> sdims = mom.dims;
    std::fill(idx.begin(), idx.end(), 0);
    for (std::size_t flat = 0; flat < mom.size(); ++flat) {
        bool interior = true;
        for (int l = 0; l < d; ++l)
            if (idx[l] == 0 || idx[l] == sdims[l] - 1)
                interior = false;
        if (interior)
            mom_red.push_back(mom.v[flat]);
        for (int a = 0; a < d; ++a) {
            if (++idx[a] < sdims[a])
                break;
            idx[a] = 0;
        }
    }

    const BasisValues bt = eval_basis(prob.time_kv, 0.0, 0);
    std::vector<double> bt0(prob.time_kv.dim(), 0.0);
    for (int k = 0; k <= prob.time_kv.degree(); ++k)
        bt0[bt.first + k] = bt.d(0, k);
    const int nt = prob.n_t(); // final-condition space keeps indices 0..m_t-2
    for (long js = 0; js < prob.N_s(); ++js)
        for (int jt = 0; jt < nt; ++jt)
            rhs[static_cast<std::size_t>(js) * nt + jt] +=
                cplx(0, 1) * bt0[jt] * mom_red[js];
    return {std::move(A), std::move(rhs)};
}

} // namespace kronschro
