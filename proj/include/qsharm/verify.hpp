#pragma once

#include "io.hpp"
#include "multiplier.hpp"

#include <chrono>
#include <functional>
#include <future>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace qsharm {

struct Check {
    std::string suite, name;
    bool passed = false;
    std::string detail;
};

struct VerifyConfig {
    int n = 2;
    int h_max = 4;
    std::vector<double> alphas{0, 1, 2, 2.9};
    std::vector<int> N_list{2, 4, 8, 16, 32, 64};
    std::vector<double> r_grid{0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 1;
};

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"algebra", "decomposition", "zonal", "recurrence", "plancherel", "geometry"};
    return names;
}

namespace detail {

class CheckList {
public:
    explicit CheckList(std::string suite) : suite_(std::move(suite)) {}

    void add(std::string name, bool ok, std::string detail = {}) { out_.push_back({suite_, std::move(name), ok, std::move(detail)}); }
    // Runs fn; exceptions count as failures.
    void run(const std::string& name, const std::function<std::string()>& fn)
    {
        try {
            std::string failure = fn();
            add(name, failure.empty(), failure);
        } catch (const std::exception& e) {
            add(name, false, std::string("exception: ") + e.what());
        }
    }
    std::vector<Check> take() { return std::move(out_); }

private:
    std::string suite_;
    std::vector<Check> out_;
};

inline std::string str(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

template <class T>
std::string str(const T& v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

inline Quaternion<mpq_class> random_quaternion(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> d(-9, 9);
    return {mpq_class(d(rng)), mpq_class(d(rng)), mpq_class(d(rng)), mpq_class(d(rng))};
}

inline std::vector<Check> suite_algebra(const VerifyConfig& c)
{
    CheckList L("algebra");
    std::mt19937_64 rng(c.seed);
    L.run("quaternion associativity and norm multiplicativity", [&]() -> std::string {
        for (int k = 0; k < 200; ++k) {
            auto p = random_quaternion(rng), q = random_quaternion(rng), r = random_quaternion(rng);
            if ((p * q) * r != p * (q * r)) return "associativity fails";
            if ((p * q).norm2() != p.norm2() * q.norm2()) return "norm not multiplicative";
        }
        auto i = Quaternion<mpq_class>::unit_i(), j = Quaternion<mpq_class>::unit_j(), k = Quaternion<mpq_class>::unit_k();
        if (i * j != k || j * k != i || k * i != j || i * i != Quaternion<mpq_class>{-1, 0, 0, 0}) return "unit table";
        return {};
    });
    const int deg = std::min(c.h_max, 3);
    L.run("Gamma commutes with Laplacian and Euler operator (degree <= " + str(deg) + ")", [&]() -> std::string {
        for (int d = 0; d <= deg; ++d) {
            std::string fail;
            enumerate_monomials(4 * c.n, d, [&](const Exponent& e) {
                if (!fail.empty()) return;
                Poly p = Poly::monomial(c.n, e);
                if (gamma_op(laplace_nonneg(p)) != laplace_nonneg(gamma_op(p))) fail = "[Gamma, Delta] != 0";
                if (gamma_op(euler_theta(p)) != euler_theta(gamma_op(p))) fail = "[Gamma, Theta] != 0";
            });
            if (!fail.empty()) return fail;
        }
        return {};
    });
    L.run("ladder relations [d0, d+-] = +-2 d+- (degree <= 2)", [&]() -> std::string {
        for (int d = 1; d <= std::min(deg, 2); ++d) {
            std::string fail;
            enumerate_monomials(4 * c.n, d, [&](const Exponent& e) {
                if (!fail.empty()) return;
                Poly p = Poly::monomial(c.n, e);
                for (auto [op, s] : {std::pair{Ladder::plus, 2L}, std::pair{Ladder::minus, -2L}}) {
                    Poly lhs = ladder(Ladder::zero, ladder(op, p)) - ladder(op, ladder(Ladder::zero, p));
                    if (lhs != ComplexRational(s) * ladder(op, p)) fail = "commutator";
                }
            });
            if (!fail.empty()) return fail;
        }
        return {};
    });
    L.run("Laplacian of |x|^2", [&]() -> std::string {
        return laplace_nonneg(Poly::norm2(c.n)) == Poly::constant(c.n, ComplexRational(-8L * c.n)) ? "" : "value";
    });
    return L.take();
}

inline std::vector<Check> suite_decomposition(const VerifyConfig& c)
{
    CheckList L("decomposition");
    for (int h = 0; h <= c.h_max; ++h) {
        L.run("dims h=" + str(h), [&]() -> std::string {
            mpz_class total = 0;
            for (int m = 0; 2 * m <= h; ++m) {
                mpz_class brute = static_cast<unsigned long>(joint_eigenspace_dim(c.n, h, m));
                if (brute != dim_H_hm(c.n, h, m)) return "m=" + str(m) + ": brute " + brute.get_str() + " vs formula " + dim_H_hm(c.n, h, m).get_str();
                total += brute;
            }
            if (total != dim_H_h(c.n, h)) return "sum over m differs from dim H_h";
            if (mpz_class(static_cast<unsigned long>(decomposition_rank(c.n, h))) != dim_H_h(c.n, h)) return "direct sum rank";
            return {};
        });
        L.run("eigenrelations h=" + str(h), [&]() -> std::string {
            for (int m = 0; 2 * m <= h; ++m) {
                auto ev = eigenvalues(c.n, h, m);
                for (const auto& p : joint_eigenspace(c.n, h, m).basis) {
                    if (sphere_laplacian(p) != ComplexRational(ev.lambda_delta) * p) return "Delta_S at m=" + str(m);
                    if (gamma_op(p) != ComplexRational(ev.lambda_gamma) * p) return "Gamma at m=" + str(m);
                }
            }
            return {};
        });
    }
    return L.take();
}

inline std::vector<Check> suite_zonal(const VerifyConfig& c)
{
    CheckList L("zonal");
    std::vector<std::pair<SpectralIndex, Poly>> zs;
    for (const auto& i : index_grid(c.h_max)) {
        L.run("closed form equals brute force " + str(i), [&]() -> std::string {
            auto z = zonal_Z(c.n, i.h, i.m).poly;
            if (z != projection_kernel_bruteforce(c.n, i.h, i.m)) return "polynomials differ";
            if (!laplace_nonneg(z).is_zero()) return "not harmonic";
            if (eval_exact(z, HPoint<mpq_class>::basis(c.n)) != ComplexRational(mpq_class(dim_H_hm(c.n, i.h, i.m)))) return "value at e";
            zs.emplace_back(i, z);
            return {};
        });
    }
    L.run("exact orthogonality", [&]() -> std::string {
        for (std::size_t a = 0; a < zs.size(); ++a)
            for (std::size_t b = a; b < zs.size(); ++b) {
                auto v = sphere_inner(zs[a].second, zs[b].second);
                ComplexRational want = a == b ? ComplexRational(mpq_class(dim_H_hm(c.n, zs[a].first.h, zs[a].first.m))) : ComplexRational(0);
                if (v != want) return str(zs[a].first) + " x " + str(zs[b].first);
            }
        return {};
    });
    return L.take();
}

inline std::vector<Check> suite_recurrence(const VerifyConfig& c)
{
    CheckList L("recurrence");
    const auto comps = detail::inner_components(HPoint<mpq_class>::basis(c.n));
    const Poly t = comps[0] * comps[0] + comps[1] * comps[1] + comps[2] * comps[2] + comps[3] * comps[3];
    const Poly r = Poly::norm2(c.n);
    for (const auto& i : index_grid(c.h_max)) {
        L.run("homogenized identity " + str(i), [&]() -> std::string {
            auto rc = recurrence_coeffs(c.n, i.h, i.m);
            Poly z = zonal_Z(c.n, i.h, i.m).poly;
            Poly rhs = ComplexRational(rc.c_mid) * (r * z) + ComplexRational(rc.c_up) * zonal_Z(c.n, i.h + 2, i.m + 1).poly;
            if (i.m >= 1) rhs += ComplexRational(rc.c_down) * (r * (r * zonal_Z(c.n, i.h - 2, i.m - 1).poly));
            return t * z == rhs ? "" : "identity fails";
        });
    }
    const int hg = std::max(20, c.h_max);
    L.run("gamma_mid composition equals closed form (h <= " + str(hg) + ")", [&]() -> std::string {
        for (const auto& i : index_grid(hg))
            if (gamma_coeffs(c.n, i.h, i.m).mid != gamma_mid_closed_form(c.n, i.h, i.m)) return str(i);
        return {};
    });
    L.run("w^2 step self-adjoint for the dim-weighted pairing", [&]() -> std::string {
        for (const auto& i : index_grid(hg)) {
            auto a = recurrence_coeffs(c.n, i.h, i.m), b = recurrence_coeffs(c.n, i.h + 2, i.m + 1);
            if (mpq_class(dim_H_hm(c.n, i.h + 2, i.m + 1)) * a.c_up != mpq_class(dim_H_hm(c.n, i.h, i.m)) * b.c_down) return str(i);
        }
        return {};
    });
    return L.take();
}

inline std::vector<Check> suite_plancherel(const VerifyConfig& c)
{
    CheckList L("plancherel");
    for (int N : c.N_list) {
        L.run("alpha=0 numerator is the dim sum, N=" + str(N), [&]() -> std::string {
            auto prof = MultiplierFn::mihlin();
            auto p = plancherel_ratio(prof, c.n, 0, N);
            double s = 0;
            for (const auto& sp : spectral_points(c.n, 0, static_cast<long>(N) * N)) {
                double v = std::abs(prof(std::sqrt(static_cast<double>(sp.lambda)) / N));
                s += dim_H_hm(c.n, sp.index.h, sp.index.m).get_d() * v * v;
            }
            return std::abs(p.numerator - s) <= 1e-12 * s ? "" : "numerator " + format_double(p.numerator) + " vs " + format_double(s);
        });
        L.run("exact numerator <= majorant, band and mihlin, N=" + str(N), [&]() -> std::string {
            for (auto prof : {MultiplierFn::band(0, 1), MultiplierFn::mihlin()}) {
                auto k = to_exact(multiplier_kernel(prof.scaled(N), c.n, static_cast<long>(N) * N));
                if (!exact_numerator_below_majorant(k, 0) || !exact_numerator_below_majorant(k, 2)) return prof.describe();
            }
            return {};
        });
        for (double a : c.alphas) {
            if (a >= 3) continue;
            L.run("ratio finite and positive, alpha=" + str(a) + ", N=" + str(N), [&]() -> std::string {
                auto p = plancherel_ratio(MultiplierFn::mihlin(), c.n, a, N);
                return std::isfinite(p.ratio) && p.ratio > 0 ? "" : "ratio " + format_double(p.ratio);
            });
        }
    }
    return L.take();
}

inline std::vector<Check> suite_geometry(const VerifyConfig& c)
{
    CheckList L("geometry");
    L.run("importance sampling agrees with hit-or-miss at r=0.9", [&]() -> std::string {
        auto a = ball_volume_mc(c.n, 0.9, c.samples, c.seed), b = ball_volume_mc_naive(c.n, 0.9, c.samples, c.seed + 1);
        double sig = std::hypot(a.stderr_, b.stderr_);
        return std::abs(a.estimate - b.estimate) <= 5 * sig ? "" : format_double(a.estimate) + " vs " + format_double(b.estimate);
    });
    L.run("ball volume exponent near 4n+2", [&]() -> std::string {
        std::vector<double> v;
        for (std::size_t k = 0; k < c.r_grid.size(); ++k) v.push_back(ball_volume_mc(c.n, c.r_grid[k], c.samples, c.seed + 10 + k).estimate);
        double s = fit_loglog(c.r_grid, v).slope;
        return std::abs(s - (4 * c.n + 2)) <= 0.3 ? "" : "slope " + format_double(s);
    });
    for (double a : c.alphas) {
        if (a >= 3) continue;
        L.run("weight integral finite, alpha=" + str(a), [&]() -> std::string {
            for (std::size_t k = 0; k < c.r_grid.size(); ++k) {
                auto e = weight_integral_mc(c.n, c.r_grid[k], a, c.samples, c.seed + 100 + k);
                if (!std::isfinite(e.estimate) || !(e.estimate > 0)) return "r=" + str(c.r_grid[k]);
            }
            return {};
        });
    }
    return L.take();
}

} // namespace detail

// Runs one named suite, or all of them ("all") concurrently; results come back in suite order.
inline std::vector<Check> run_suite(const std::string& name, const VerifyConfig& c)
{
    require_n(c.n);
    if (c.h_max < 0) throw std::invalid_argument("verify: h_max must be nonnegative");
    using Fn = std::vector<Check> (*)(const VerifyConfig&);
    const std::vector<std::pair<std::string, Fn>> table{{"algebra", detail::suite_algebra},       {"decomposition", detail::suite_decomposition},
                                                        {"zonal", detail::suite_zonal},           {"recurrence", detail::suite_recurrence},
                                                        {"plancherel", detail::suite_plancherel}, {"geometry", detail::suite_geometry}};
    if (name != "all") {
        for (const auto& [n, fn] : table)
            if (n == name) return fn(c);
        throw std::invalid_argument("verify: unknown suite '" + name + "'");
    }
    std::vector<std::vector<Check>> parts(table.size());
    if (worker_count() > 1) {
        std::vector<std::future<std::vector<Check>>> fut;
        for (const auto& [n, fn] : table) fut.push_back(std::async(std::launch::async, fn, std::cref(c)));
        for (std::size_t k = 0; k < fut.size(); ++k) parts[k] = fut[k].get();
    } else {
        for (std::size_t k = 0; k < table.size(); ++k) parts[k] = table[k].second(c);
    }
    std::vector<Check> out;
    for (auto& p : parts)
        for (auto& ch : p) out.push_back(std::move(ch));
    return out;
}

} // namespace qsharm
