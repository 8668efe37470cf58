#pragma once

#include "linalg.hpp"
#include "poly.hpp"

#include <compare>
#include <functional>
#include <optional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsharm {

// (h,m) with 2m <= h
struct SpectralIndex {
    int h = 0;
    int m = 0;

    SpectralIndex() = default;
    SpectralIndex(int h_, int m_) : h(h_), m(m_)
    {
        if (!valid(h, m)) throw std::domain_error("SpectralIndex: (" + std::to_string(h) + "," + std::to_string(m) + ") not in I_Q");
    }
    static bool valid(int h, int m) { return h >= 0 && m >= 0 && 2 * m <= h; }

    auto operator<=>(const SpectralIndex&) const = default;
    friend std::ostream& operator<<(std::ostream& os, const SpectralIndex& s)
    {
        return os << "(" << s.h << "," << s.m << ")";
    }
};

struct EigenData {
    long lambda_delta = 0;
    long lambda_gamma = 0;
    long lambda_L = 0;
    mpz_class dim;
};

inline void require_n(int n)
{
    if (n < 2) throw std::invalid_argument("n must be at least 2");
}

inline mpz_class dim_P_h(int n, int h)
{
    require_n(n);
    if (h < 0) return 0;
    return binomial(h + 4L * n - 1, 4L * n - 1);
}

inline mpz_class dim_H_h(int n, int h)
{
    return dim_P_h(n, h) - dim_P_h(n, h - 2);
}

inline mpz_class dim_H_hm(int n, int h, int m)
{
    require_n(n);
    SpectralIndex idx(h, m);
    const long N = n;
    mpz_class num = mpz_class(h - 2 * m + 1) * (h - 2 * m + 1) * (h + 2 * N - 1) * binomial(h - m + 2 * N - 2, 2 * N - 3) *
                    binomial(m + 2 * N - 3, 2 * N - 3);
    mpz_class den = (2 * N - 2) * (2 * N - 1);
    if (num % den != 0) throw std::logic_error("dim_H_hm: non-integral dimension");
    return num / den;
}

inline long lambda_L(int n, int h, int m)
{
    return 4L * m * (h - m + 1) + 4L * (n - 1) * h;
}

inline EigenData eigenvalues(int n, int h, int m)
{
    require_n(n);
    SpectralIndex idx(h, m);
    EigenData d;
    d.lambda_delta = static_cast<long>(h) * (h + 4L * n - 2);
    d.lambda_gamma = static_cast<long>(h - 2 * m) * (h - 2 * m + 2);
    d.lambda_L = lambda_L(n, h, m);
    d.dim = dim_H_hm(n, h, m);
    return d;
}

inline std::vector<SpectralIndex> index_grid(int h_max)
{
    std::vector<SpectralIndex> out;
    for (int h = 0; h <= h_max; ++h)
        for (int m = 0; 2 * m <= h; ++m) out.emplace_back(h, m);
    return out;
}

// Complex coordinates for the structure given by left multiplication by i.
// Per quaternion block the variables are (z1, conj z1, z2, conj z2) with
// z1 = a + ib, z2 = c + id.
class ComplexFrame {
public:
    explicit ComplexFrame(int n) : n_(n), p_(dim(), dim()), pinv_(dim(), dim())
    {
        require_n(n);
        const ComplexRational i = ComplexRational::i();
        const ComplexRational half(mpq_class(1, 2));
        for (std::size_t b = 0; b < static_cast<std::size_t>(n); ++b) {
            std::size_t o = 4 * b;
            p_(o, o) = 1;
            p_(o, o + 1) = i;
            p_(o + 1, o) = 1;
            p_(o + 1, o + 1) = -i;
            p_(o + 2, o + 2) = 1;
            p_(o + 2, o + 3) = i;
            p_(o + 3, o + 2) = 1;
            p_(o + 3, o + 3) = -i;

            pinv_(o, o) = half;
            pinv_(o, o + 1) = half;
            pinv_(o + 1, o) = -half * i;
            pinv_(o + 1, o + 1) = half * i;
            pinv_(o + 2, o + 2) = half;
            pinv_(o + 2, o + 3) = half;
            pinv_(o + 3, o + 2) = -half * i;
            pinv_(o + 3, o + 3) = half * i;
        }
    }

    int n() const { return n_; }
    // z = P xi
    const Matrix<ComplexRational>& P() const { return p_; }
    const Matrix<ComplexRational>& P_inv() const { return pinv_; }

    Poly to_real(const Poly& pz) const { return substitute_linear(pz, p_); }
    Poly to_complex(const Poly& preal) const { return substitute_linear(preal, pinv_); }

    // derivation along x -> A x, rewritten in z: A_z = P A P^{-1}
    LinearField field(const LinearField& real) const
    {
        return LinearField::from_matrix(n_, p_ * real.matrix() * pinv_);
    }
    // sum S_kl d_k d_l rewritten in z: S_z = P S P^T
    SecondOrderOp second_order(const Matrix<ComplexRational>& s) const
    {
        Matrix<ComplexRational> pt(dim(), dim());
        for (std::size_t r = 0; r < dim(); ++r)
            for (std::size_t c = 0; c < dim(); ++c) pt(r, c) = p_(c, r);
        return SecondOrderOp::from_matrix(n_, p_ * s * pt);
    }

    // (p - q, w_1, ..., w_n): eigenvalue of the zero ladder operator and the
    // weights of right multiplication by i in each block
    std::vector<int> key(const Exponent& e) const
    {
        std::vector<int> k(static_cast<std::size_t>(n_) + 1, 0);
        for (std::size_t b = 0; b < static_cast<std::size_t>(n_); ++b) {
            int a1 = e[4 * b], b1 = e[4 * b + 1], a2 = e[4 * b + 2], b2 = e[4 * b + 3];
            k[0] += a1 - b1 + a2 - b2;
            k[b + 1] = (a1 - b1) - (a2 - b2);
        }
        return k;
    }

private:
    std::size_t dim() const { return static_cast<std::size_t>(4 * n_); }
    int n_;
    Matrix<ComplexRational> p_, pinv_;
};

inline void enumerate_monomials(int nvars, int degree, const std::function<void(const Exponent&)>& fn)
{
    Exponent e(static_cast<std::size_t>(nvars), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == nvars - 1) {
            e[static_cast<std::size_t>(pos)] = static_cast<std::uint16_t>(left);
            fn(e);
            return;
        }
        for (int v = left; v >= 0; --v) {
            e[static_cast<std::size_t>(pos)] = static_cast<std::uint16_t>(v);
            rec(pos + 1, left - v);
        }
        e[static_cast<std::size_t>(pos)] = 0;
    };
    rec(0, degree);
}

namespace detail {

struct ZOperators {
    ComplexFrame frame;
    LinearField t[3];
    SecondOrderOp laplace;

    explicit ZOperators(int n) : frame(n)
    {
        for (int u = 0; u < 3; ++u) t[u] = frame.field(field_T(n, static_cast<Unit>(u)));
        Matrix<ComplexRational> s(static_cast<std::size_t>(4 * n), static_cast<std::size_t>(4 * n));
        for (std::size_t k = 0; k < s.rows(); ++k) s(k, k) = -1;
        laplace = frame.second_order(s);
    }

    Poly gamma(const Poly& p) const
    {
        Poly r(p.n());
        for (const auto& f : t) r -= apply_field(f, apply_field(f, p));
        return r;
    }
};

// Monomials of degree h in complex coordinates, grouped by weight key.
inline std::map<std::vector<int>, std::vector<Exponent>> weight_blocks(const ComplexFrame& fr, int h)
{
    std::map<std::vector<int>, std::vector<Exponent>> blocks;
    enumerate_monomials(4 * fr.n(), h, [&](const Exponent& e) { blocks[fr.key(e)].push_back(e); });
    return blocks;
}

// Append the matrix of op restricted to `cols` (images expanded in monomials).
inline void append_operator_rows(std::vector<std::vector<ComplexRational>>& rows, const std::vector<Exponent>& cols,
                                 const std::function<Poly(const Poly&)>& op, int n)
{
    std::map<Exponent, std::size_t> row_of;
    std::vector<std::vector<ComplexRational>> local;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        Poly img = op(Poly::monomial(n, cols[c]));
        for (const auto& [e, v] : img.terms()) {
            auto [it, ins] = row_of.try_emplace(e, local.size());
            if (ins) local.emplace_back(cols.size(), ComplexRational());
            local[it->second][c] = v;
        }
    }
    for (auto& r : local) rows.push_back(std::move(r));
}

inline std::vector<std::vector<ComplexRational>> block_nullspace(const std::vector<std::vector<ComplexRational>>& rows,
                                                                 std::size_t ncols)
{
    if (rows.empty()) {
        std::vector<std::vector<ComplexRational>> id;
        for (std::size_t c = 0; c < ncols; ++c) {
            std::vector<ComplexRational> v(ncols);
            v[c] = 1;
            id.push_back(std::move(v));
        }
        return id;
    }
    Matrix<ComplexRational> a(rows.size(), ncols);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < ncols; ++c) a(r, c) = rows[r][c];
    return a.nullspace();
}

inline Poly combine(int n, const std::vector<Exponent>& cols, const std::vector<ComplexRational>& v)
{
    Poly p(n);
    for (std::size_t c = 0; c < cols.size(); ++c) p.add_term(cols[c], v[c]);
    return p;
}

} // namespace detail

// One weight block of a space: basis polynomials in real coordinates
// together with their complex-coordinate form.
struct WeightBlock {
    std::vector<int> key;
    std::vector<Poly> complex_basis;
    std::vector<Poly> basis;
};

struct HarmonicSpaceBasis {
    int n = 2;
    SpectralIndex index;
    std::vector<Poly> basis;
    std::vector<WeightBlock> blocks;
};

struct SpaceOptions {
    bool real_coordinates = true;   // convert basis to real coordinates
    bool only_e_visible = false;    // keep only blocks that can be nonzero at e = (1,0,...,0)
};

namespace detail {

inline bool e_visible(const std::vector<int>& key)
{
    for (std::size_t b = 2; b < key.size(); ++b)
        if (key[b] != 0) return false;
    return key[0] == key[1];
}

// Kernel of the Laplacian, and of Gamma - lambda when gamma_eig is given, per weight block.
inline std::vector<WeightBlock> harmonic_blocks(int n, int h, std::optional<long> gamma_eig, const SpaceOptions& opt)
{
    require_n(n);
    if (h < 0) throw std::invalid_argument("degree must be nonnegative");
    mpz_class d = dim_P_h(n, h);
    if (d > mpz_class(static_cast<unsigned long>(term_budget())))
        throw BudgetExceeded("dim P_h = " + d.get_str() + " exceeds term budget");
    ZOperators ops(n);
    std::vector<WeightBlock> out;
    for (const auto& [key, cols] : weight_blocks(ops.frame, h)) {
        if (opt.only_e_visible && !e_visible(key)) continue;
        std::vector<std::vector<ComplexRational>> rows;
        append_operator_rows(rows, cols, [&](const Poly& p) { return apply_second_order(ops.laplace, p); }, n);
        if (gamma_eig) {
            const ComplexRational lam(*gamma_eig);
            append_operator_rows(rows, cols, [&](const Poly& p) { return ops.gamma(p) - lam * p; }, n);
        }
        auto ns = block_nullspace(rows, cols.size());
        if (ns.empty()) continue;
        WeightBlock blk;
        blk.key = key;
        for (const auto& v : ns) {
            Poly pz = combine(n, cols, v);
            if (opt.real_coordinates) blk.basis.push_back(ops.frame.to_real(pz));
            blk.complex_basis.push_back(std::move(pz));
        }
        out.push_back(std::move(blk));
    }
    return out;
}

inline std::vector<Poly> flatten(const std::vector<WeightBlock>& blocks, bool complex_coords)
{
    std::vector<Poly> out;
    for (const auto& b : blocks)
        for (const auto& p : complex_coords ? b.complex_basis : b.basis) out.push_back(p);
    return out;
}

} // namespace detail

// Basis of the harmonic homogeneous polynomials of degree h.
inline std::vector<Poly> harmonic_space(int n, int h)
{
    auto blocks = detail::harmonic_blocks(n, h, std::nullopt, {});
    auto basis = detail::flatten(blocks, false);
    if (mpz_class(static_cast<unsigned long>(basis.size())) != dim_H_h(n, h))
        throw std::logic_error("harmonic_space: dimension mismatch");
    return basis;
}

inline HarmonicSpaceBasis joint_eigenspace(int n, int h, int m, const SpaceOptions& opt = {})
{
    SpectralIndex idx(h, m);
    HarmonicSpaceBasis out;
    out.n = n;
    out.index = idx;
    out.blocks = detail::harmonic_blocks(n, h, eigenvalues(n, h, m).lambda_gamma, opt);
    out.basis = detail::flatten(out.blocks, !opt.real_coordinates);
    if (!opt.only_e_visible && mpz_class(static_cast<unsigned long>(out.basis.size())) != dim_H_hm(n, h, m))
        throw std::logic_error("joint_eigenspace: dimension " + std::to_string(out.basis.size()) +
                               " does not match closed form " + dim_H_hm(n, h, m).get_str());
    return out;
}

// Dimension of the joint eigenspace by exact elimination, without building real-coordinate bases.
inline std::size_t joint_eigenspace_dim(int n, int h, int m)
{
    SpectralIndex idx(h, m);
    SpaceOptions opt;
    opt.real_coordinates = false;
    std::size_t d = 0;
    for (const auto& b : detail::harmonic_blocks(n, h, eigenvalues(n, h, m).lambda_gamma, opt)) d += b.complex_basis.size();
    return d;
}

// Rank of the union of all joint eigenspace bases of degree h, compared blockwise.
inline std::size_t decomposition_rank(int n, int h)
{
    SpaceOptions opt;
    opt.real_coordinates = false;
    std::map<std::vector<int>, std::vector<Poly>> by_key;
    for (int m = 0; 2 * m <= h; ++m)
        for (auto& b : detail::harmonic_blocks(n, h, eigenvalues(n, h, m).lambda_gamma, opt))
            for (auto& p : b.complex_basis) by_key[b.key].push_back(std::move(p));
    std::size_t total = 0;
    for (const auto& [key, polys] : by_key) {
        std::map<Exponent, std::size_t> col;
        for (const auto& p : polys)
            for (const auto& [e, c] : p.terms()) col.try_emplace(e, col.size());
        Matrix<ComplexRational> a(polys.size(), col.size());
        for (std::size_t r = 0; r < polys.size(); ++r)
            for (const auto& [e, c] : polys[r].terms()) a(r, col[e]) = c;
        total += a.rank();
    }
    return total;
}

// Monomials z^alpha conj(z)^beta with |alpha| = p, |beta| = q, in real coordinates.
inline std::vector<Poly> bidegree_space(int n, int p, int q)
{
    require_n(n);
    if (p < 0 || q < 0) throw std::invalid_argument("bidegree_space: negative degree");
    mpz_class d = binomial(p + 2L * n - 1, 2L * n - 1) * binomial(q + 2L * n - 1, 2L * n - 1);
    if (d > mpz_class(static_cast<unsigned long>(term_budget()))) throw BudgetExceeded("bidegree_space: budget");
    ComplexFrame fr(n);
    std::vector<Poly> out;
    enumerate_monomials(4 * n, p + q, [&](const Exponent& e) {
        int hol = 0;
        for (std::size_t b = 0; b < static_cast<std::size_t>(n); ++b) hol += e[4 * b] + e[4 * b + 2];
        if (hol == p) out.push_back(fr.to_real(Poly::monomial(n, e)));
    });
    return out;
}

// ---------------------------------------------------------------------------
// su(2) string structure

struct Su2Level {
    int ell = 0;                         // Gamma eigenvalue ell(ell+2)
    std::size_t dim = 0;                 // dimension of that Gamma eigenspace
    std::vector<std::size_t> weight_dims; // dims of the d0-eigenspaces with eigenvalue ell-2j, j = 0..ell
    bool raising_bijective = true;
    bool lowering_bijective = true;
};

struct Su2Report {
    std::size_t space_dim = 0;
    bool gamma_diagonalizable = false;
    bool d0_diagonalizable = false;
    std::vector<Su2Level> levels;
    std::map<int, std::size_t> d0_dims;  // eigenvalue -> dim on the whole space
    bool msdim_holds = false;
    bool ok() const
    {
        if (!gamma_diagonalizable || !d0_diagonalizable || !msdim_holds) return false;
        for (const auto& l : levels)
            if (!l.raising_bijective || !l.lowering_bijective) return false;
        return true;
    }
};

namespace detail {

using CMat = Matrix<ComplexRational>;

inline CMat columns_of(const std::vector<std::vector<ComplexRational>>& vs, std::size_t rows)
{
    CMat m(rows, vs.size());
    for (std::size_t c = 0; c < vs.size(); ++c)
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = vs[c][r];
    return m;
}

inline std::vector<std::vector<ComplexRational>> kernel_of(const CMat& a) { return a.nullspace(); }

inline CMat shifted(const CMat& a, const ComplexRational& lam)
{
    return a - lam * CMat::identity(a.rows());
}

} // namespace detail

inline Su2Report su2_string_check(const std::vector<Poly>& space)
{
    using detail::CMat;
    Su2Report rep;
    if (space.empty()) {
        rep.gamma_diagonalizable = rep.d0_diagonalizable = rep.msdim_holds = true;
        return rep;
    }
    const int n = space.front().n();
    // coordinates on a basis extracted from the spanning set
    std::map<Exponent, std::size_t> col;
    for (const auto& p : space)
        for (const auto& [e, c] : p.terms()) col.try_emplace(e, 0);
    std::size_t idx = 0;
    for (auto& [e, i] : col) i = idx++;
    auto coords = [&](const Poly& p) {
        std::vector<ComplexRational> v(col.size());
        for (const auto& [e, c] : p.terms()) {
            auto it = col.find(e);
            if (it == col.end()) throw std::domain_error("su2_string_check: space is not invariant");
            v[it->second] = c;
        }
        return v;
    };
    std::vector<std::vector<ComplexRational>> span_vecs;
    for (const auto& p : space) span_vecs.push_back(coords(p));
    CMat span = detail::columns_of(span_vecs, col.size());
    CMat red = span;
    auto piv = red.rref();
    std::vector<Poly> basis;
    for (auto c : piv) basis.push_back(space[c]);
    CMat b = span.columns(piv);
    const std::size_t k = basis.size();
    rep.space_dim = k;

    auto rep_matrix = [&](Unit u) {
        std::vector<std::vector<ComplexRational>> imgs;
        for (const auto& p : basis) imgs.push_back(coords(vector_field_T(u, p)));
        auto x = b.solve(detail::columns_of(imgs, col.size()));
        if (!x) throw std::domain_error("su2_string_check: space is not invariant");
        return *x;
    };
    CMat ti = rep_matrix(Unit::i), tj = rep_matrix(Unit::j), tk = rep_matrix(Unit::k);
    const ComplexRational i = ComplexRational::i();
    CMat gamma = ComplexRational(-1) * (ti * ti + tj * tj + tk * tk);
    CMat d0 = i * ti;
    CMat dplus = i * tj - tk;
    CMat dminus = i * tj + tk;

    int dmax = 0;
    for (const auto& p : basis) dmax = std::max(dmax, p.degree());

    std::size_t total_d0 = 0;
    for (int mu = -dmax; mu <= dmax; ++mu) {
        auto ns = detail::kernel_of(detail::shifted(d0, mu));
        if (!ns.empty()) rep.d0_dims[mu] = ns.size();
        total_d0 += ns.size();
    }
    rep.d0_diagonalizable = total_d0 == k;

    std::size_t total_gamma = 0;
    rep.msdim_holds = true;
    for (int ell = 0; ell <= dmax; ++ell) {
        CMat g = detail::shifted(gamma, ComplexRational(static_cast<long>(ell) * (ell + 2)));
        auto eg = detail::kernel_of(g);
        if (eg.empty()) continue;
        total_gamma += eg.size();
        Su2Level lvl;
        lvl.ell = ell;
        lvl.dim = eg.size();
        std::vector<std::vector<std::vector<ComplexRational>>> w;
        for (int j = 0; j <= ell; ++j) {
            auto ws = detail::kernel_of(CMat::vstack(g, detail::shifted(d0, ell - 2 * j)));
            lvl.weight_dims.push_back(ws.size());
            w.push_back(std::move(ws));
        }
        std::size_t sum = 0;
        for (auto v : lvl.weight_dims) sum += v;
        bool equal_dims = sum == lvl.dim;
        for (auto v : lvl.weight_dims) equal_dims = equal_dims && v == lvl.weight_dims.front();
        // d+ raises the d0-eigenvalue by 2 inside this Gamma-eigenspace, d- lowers it
        auto maps_bijectively = [&](const CMat& op, std::size_t from, std::size_t to, int target_eig) {
            if (w[from].size() != w[to].size()) return false;
            if (w[from].empty()) return true;
            CMat img = op * detail::columns_of(w[from], k);
            if (!(g * img).is_zero()) return false;
            if (!(detail::shifted(d0, target_eig) * img).is_zero()) return false;
            return img.rank() == w[from].size();
        };
        for (int j = 1; j <= ell; ++j) {
            auto up = static_cast<std::size_t>(j - 1), down = static_cast<std::size_t>(j);
            lvl.raising_bijective = lvl.raising_bijective && maps_bijectively(dplus, down, up, ell - 2 * j + 2);
            lvl.lowering_bijective = lvl.lowering_bijective && maps_bijectively(dminus, up, down, ell - 2 * j);
        }
        lvl.raising_bijective = lvl.raising_bijective && equal_dims;
        lvl.lowering_bijective = lvl.lowering_bijective && equal_dims;
        auto d0dim = [&](int mu) {
            auto it = rep.d0_dims.find(mu);
            return it == rep.d0_dims.end() ? std::size_t{0} : it->second;
        };
        long rhs = static_cast<long>(ell + 1) * (static_cast<long>(d0dim(ell)) - static_cast<long>(d0dim(ell + 2)));
        if (static_cast<long>(lvl.dim) != rhs) rep.msdim_holds = false;
        rep.levels.push_back(std::move(lvl));
    }
    rep.gamma_diagonalizable = total_gamma == k;
    (void)n;
    return rep;
}

// ---------------------------------------------------------------------------
// projection kernels

namespace detail {

// K = sum_a v_a psi_a with sum_b v_b <psi_b, psi_a> = conj(psi_a(e)): the reproducing kernel at e.
inline Poly kernel_from_basis(const std::vector<Poly>& psi, const std::vector<ComplexRational>& at_e, int n)
{
    Poly k(n);
    if (psi.empty()) return k;
    bool any = false;
    for (const auto& c : at_e) any = any || !c.is_zero();
    if (!any) return k;
    const std::size_t d = psi.size();
    Matrix<ComplexRational> g(d, d), rhs(d, 1);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b <= a; ++b) {
            ComplexRational v = sphere_inner(psi[b], psi[a]);
            g(a, b) = v;
            g(b, a) = v.conj();
        }
        rhs(a, 0) = at_e[a].conj();
    }
    auto sol = g.solve(rhs);
    if (!sol || g.rank() != d) throw std::logic_error("projection kernel: singular Gram matrix");
    for (std::size_t a = 0; a < d; ++a) k += (*sol)(a, 0) * psi[a];
    return k;
}

} // namespace detail

// Reproducing kernel K(., e) of the span of an arbitrary exact basis (full Gram matrix).
inline Poly projection_kernel_from_basis(const std::vector<Poly>& basis, const HPoint<mpq_class>& e)
{
    if (basis.empty()) throw std::invalid_argument("projection_kernel_from_basis: empty basis");
    std::vector<ComplexRational> at_e;
    for (const auto& p : basis) at_e.push_back(eval_exact(p, e));
    return detail::kernel_from_basis(basis, at_e, basis.front().n());
}

// K_{h,m}(., e). Weight blocks are mutually orthogonal, so the Gram matrix is
// inverted block by block; blocks vanishing at e contribute nothing.
inline Poly projection_kernel_bruteforce(int n, int h, int m, const SpherePoint<mpq_class>& e)
{
    if (e.n() != n) throw std::invalid_argument("projection_kernel_bruteforce: dimension mismatch");
    const auto& pt = e.point();
    bool is_e1 = pt == HPoint<mpq_class>::basis(n, 0);
    SpaceOptions opt;
    opt.only_e_visible = is_e1;
    auto space = joint_eigenspace(n, h, m, opt);
    Poly k(n);
    for (const auto& blk : space.blocks) {
        std::vector<ComplexRational> at_e;
        for (const auto& p : blk.basis) at_e.push_back(eval_exact(p, pt));
        k += detail::kernel_from_basis(blk.basis, at_e, n);
    }
    return k;
}

inline Poly projection_kernel_bruteforce(int n, int h, int m)
{
    return projection_kernel_bruteforce(n, h, m, SpherePoint<mpq_class>::basis(n));
}

} // namespace qsharm
