#include <qsharm/multiplier.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace qsharm;

namespace {

// max of |F| over a dense sample of [lo, hi], endpoints included
double sampled_sup(const MultiplierFn& f, double lo, double hi, int pts = 4001)
{
    double s = 0;
    for (int k = 0; k < pts; ++k) s = std::max(s, std::abs(f(lo + (hi - lo) * k / (pts - 1))));
    return s;
}

std::set<SpectralIndex> brute_support(const MultiplierFn& f, int n, int h_max)
{
    std::set<SpectralIndex> s;
    for (const auto& i : index_grid(h_max))
        if (f(std::sqrt(static_cast<double>(lambda_L(n, i.h, i.m)))) != 0.0) s.insert(i);
    return s;
}

} // namespace

TEST(MultiplierFn, Values)
{
    auto b = MultiplierFn::band(1, 2);
    EXPECT_EQ(b(0.99), 0.0);
    EXPECT_EQ(b(1), 1.0);
    EXPECT_EQ(b(2), 0.0);
    auto r0 = MultiplierFn::riesz(0, 0.25);
    EXPECT_EQ(r0(1.99), 1.0);
    EXPECT_EQ(r0(2), 0.0);
    EXPECT_NEAR(MultiplierFn::riesz(2, 0.25)(1).real(), 0.75 * 0.75, 1e-15);
    EXPECT_NEAR(MultiplierFn::heat(0.5)(2).real(), std::exp(-2.0), 1e-15);
    auto m = MultiplierFn::mihlin();
    EXPECT_EQ(m(0.5), 1.0);
    EXPECT_EQ(m(1), 0.0);
    EXPECT_NEAR(m(0.5 + 1e-9).real(), 1.0, 1e-12);
    EXPECT_LT(m(0.999).real(), 1e-100);
    auto t = MultiplierFn::tabulated({0, 1, 3}, {0, 2, std::complex<double>(0, 4)});
    EXPECT_EQ(t(0.5), 1.0);
    EXPECT_EQ(t(2), std::complex<double>(1, 2));
    EXPECT_EQ(t(3.5), 0.0);
    EXPECT_EQ(m.scaled(4)(2), 1.0);
    EXPECT_THROW(MultiplierFn::band(2, 1), std::invalid_argument);
    EXPECT_THROW(MultiplierFn::tabulated({0, 0}, {1, 1}), std::invalid_argument);
}

TEST(MultiplierFn, SupMatchesDenseSampling)
{
    std::vector<MultiplierFn> fs{MultiplierFn::band(0.3, 0.7), MultiplierFn::riesz(1.5, 2), MultiplierFn::heat(3), MultiplierFn::mihlin(),
                                 MultiplierFn::tabulated({0.1, 0.4, 0.6, 0.9}, {1, std::complex<double>(-2, 1), 0.5, 3}),
                                 MultiplierFn::mihlin().scaled(0.8)};
    for (const auto& f : fs)
        for (int N : {1, 3, 7, 16})
            for (int k = 1; k <= N; ++k) {
                double lo = (k - 1.0) / N, hi = static_cast<double>(k) / N;
                double s = f.sup_abs(lo, hi), d = sampled_sup(f, lo, hi);
                EXPECT_GE(s + 1e-15, d) << f.describe() << " " << k << "/" << N;
                EXPECT_NEAR(s, d, 1e-3 * (1 + s)) << f.describe() << " " << k << "/" << N;
            }
}

TEST(NormN2, Examples)
{
    for (int N = 1; N <= 10; ++N) {
        EXPECT_DOUBLE_EQ(norm_N2(MultiplierFn::band(0, 1), N).value, 1.0);
        EXPECT_NEAR(norm_N2(MultiplierFn::band(0, 1.0 / N), N).value, 1 / std::sqrt(static_cast<double>(N)), 1e-15);
    }
    EXPECT_NEAR(norm_N2(MultiplierFn::tabulated({0, 1}, {0, 1}), 2).value, std::sqrt(5.0 / 8), 1e-15);
    // dilation: F(4 .) for F = band[0, 2) lives on the first of two cells
    EXPECT_DOUBLE_EQ(norm_N2(MultiplierFn::band(0, 2), 2, 4).value, std::sqrt(0.5));
    EXPECT_THROW(norm_N2(MultiplierFn::mihlin(), 0), std::invalid_argument);
}

TEST(Spectrum, PointsMatchIndexScan)
{
    for (int n = 2; n <= 4; ++n) {
        const long hi = 2000;
        std::set<std::pair<SpectralIndex, long>> fact, brute;
        for (const auto& p : spectral_points(n, 0, hi)) fact.insert({p.index, p.lambda});
        for (const auto& i : index_grid(static_cast<int>(hi / (4 * (n - 1))) + 1)) {
            long lam = lambda_L(n, i.h, i.m);
            if (lam < hi) brute.insert({i, lam});
        }
        EXPECT_EQ(fact, brute) << n;
    }
}

TEST(Spectrum, EnumerateIj)
{
    auto e1 = enumerate_Ij(2, 1);
    ASSERT_EQ(e1.members.size(), 1u);
    EXPECT_EQ(e1.members[0], SpectralIndex(0, 0));
    EXPECT_TRUE(enumerate_Ij(2, 2).members.empty());
    EXPECT_EQ(lambda_L(2, 1, 0), 4);
    auto e3 = enumerate_Ij(2, 3).members;
    EXPECT_NE(std::find(e3.begin(), e3.end(), SpectralIndex(1, 0)), e3.end());
    for (int n = 2; n <= 4; ++n)
        for (int j = 1; j <= 64; ++j) {
            auto a = enumerate_Ij(n, j), b = enumerate_Ij_scan(n, j);
            ASSERT_EQ(a.members, b.members) << n << " " << j;
            for (const auto& i : a.members) {
                long lam = lambda_L(n, i.h, i.m);
                ASSERT_TRUE(lam >= static_cast<long>(j - 1) * (j - 1) && lam < static_cast<long>(j) * j);
            }
        }
    EXPECT_THROW(enumerate_Ij(2, 0), std::invalid_argument);
}

TEST(MultiplierKernel, Examples)
{
    auto k = multiplier_kernel(MultiplierFn::band(0, 1), 2, 100);
    ASSERT_EQ(k.coeffs.size(), 1u);
    EXPECT_EQ(k.coeff({0, 0}), 1.0);

    auto heat = multiplier_kernel(MultiplierFn::heat(0.01), 2, 400, true);
    for (const auto& [i, a] : heat.coeffs) EXPECT_NEAR(a.real(), std::exp(-0.01 * lambda_L(2, i.h, i.m)), 1e-15);

    for (auto f : {MultiplierFn::band(1, 2), MultiplierFn::band(2, 5), MultiplierFn::riesz(1, 0.01)}) {
        auto kk = multiplier_kernel(f, 2, 200);
        std::set<SpectralIndex> got;
        for (const auto& [i, a] : kk.coeffs) got.insert(i);
        EXPECT_EQ(got, brute_support(f, 2, 60)) << f.describe();
    }
    EXPECT_TRUE(multiplier_kernel(MultiplierFn::band(1, 2), 2, 100).is_zero());
}

TEST(MultiplierKernel, TruncationNeedsAcknowledgment)
{
    EXPECT_THROW(multiplier_kernel(MultiplierFn::heat(1), 2, 100), std::domain_error);
    // lambda = 8 has sqrt 8 < 3, outside the cutoff 4
    EXPECT_THROW(multiplier_kernel(MultiplierFn::band(0, 3), 2, 4), std::domain_error);
    EXPECT_NO_THROW(multiplier_kernel(MultiplierFn::band(0, 3), 2, 4, true));
    // nothing nonzero between 4 and 3^2 for band [0, 2)
    EXPECT_NO_THROW(multiplier_kernel(MultiplierFn::band(0, 2), 2, 4));
}

TEST(Plancherel, Examples)
{
    auto p = plancherel_ratio(MultiplierFn::band(0, 1), 2, 0, 1);
    EXPECT_DOUBLE_EQ(p.numerator, 1.0);
    EXPECT_DOUBLE_EQ(p.denominator, 1.0);
    EXPECT_DOUBLE_EQ(p.ratio, 1.0);
    EXPECT_THROW(plancherel_ratio(MultiplierFn::band(0, 1), 2, 3, 4), std::domain_error);
    EXPECT_NO_THROW(plancherel_ratio(MultiplierFn::band(0, 1), 2, 3, 4, true));
    EXPECT_THROW(plancherel_ratio(MultiplierFn::band(0, 2), 2, 1, 4), std::invalid_argument);
}

TEST(Plancherel, AlphaZeroNumeratorIsDimSum)
{
    for (int N : {2, 5, 16}) {
        auto prof = MultiplierFn::mihlin();
        auto p = plancherel_ratio(prof, 2, 0, N);
        double s = 0;
        for (const auto& i : index_grid(N * N)) {
            double v = std::abs(prof(std::sqrt(static_cast<double>(lambda_L(2, i.h, i.m))) / N));
            s += dim_H_hm(2, i.h, i.m).get_d() * v * v;
        }
        EXPECT_NEAR(p.numerator, s, 1e-12 * s) << N;
    }
}

TEST(Plancherel, ExactNumeratorBelowMajorant)
{
    for (int N : {2, 4, 8, 16})
        for (auto prof : {MultiplierFn::band(0, 1), MultiplierFn::mihlin()}) {
            auto k = to_exact(multiplier_kernel(prof.scaled(N), 2, static_cast<long>(N) * N));
            EXPECT_TRUE(exact_numerator_below_majorant(k, 0));
            EXPECT_TRUE(exact_numerator_below_majorant(k, 2)) << N << prof.describe();
            // float path of the ratio agrees with the rational computation
            double exact = weighted_L2_even(k, 2).get_d();
            EXPECT_NEAR(plancherel_ratio(prof, 2, 2, N).numerator, exact, 1e-10 * exact);
        }
}

TEST(Plancherel, SqrtLowerBound)
{
    for (auto q : {mpq_class(2), mpq_class(1, 3), mpq_class(49, 4), mpq_class(0)}) {
        auto s = sqrt_lower(q);
        EXPECT_LE(s * s, q);
        EXPECT_NEAR(s.get_d(), std::sqrt(q.get_d()), 1e-15 * (1 + q.get_d()));
    }
    EXPECT_EQ(sqrt_lower(mpq_class(49, 4)), mpq_class(7, 2));
}

TEST(Counting, SumsUseEnumeration)
{
    // j = 3, n = 2: members with lambda in [4, 9)
    double s = 0;
    for (const auto& i : enumerate_Ij_scan(2, 3).members) s += std::pow(i.m + 1.0, 1.0) * std::pow(i.h + 1.0, 4.0);
    EXPECT_DOUBLE_EQ(counting_sum(2, 3, 0, false), s);
    EXPECT_EQ(counting_sum(2, 2, 1, true), 0.0);
}

TEST(Resolvent, RejectsSmallEll)
{
    EXPECT_THROW(resolvent_diag_sum(2, 1, 2), std::domain_error);
    EXPECT_THROW(resolvent_diag_sum(2, 0, 3), std::domain_error);
}

TEST(Resolvent, LargeRadiusTendsToOne)
{
    EXPECT_NEAR(resolvent_diag_sum(2, 1e3, 3).sum, 1.0, 1e-15);
    // next term: dim H_{1,0} (1 + 4 r^2)^{-6} = 8 / 401^6
    auto r = resolvent_diag_sum(2, 10, 3);
    EXPECT_NEAR(r.sum - 1.0, 8 * std::pow(401.0, -6), 4e-16); // one ulp of 1
}

TEST(Resolvent, MatchesDirectSum)
{
    // direct sum over (h, m) with exact dimensions, h <= H; the omitted part is below 1e-7 here
    for (double rr : {1.0, 2.0}) {
        const int H = 3000;
        long double s = 0;
        for (int h = 0; h <= H; ++h)
            for (int m = 0; 2 * m <= h; ++m)
                s += dim_H_hm(2, h, m).get_d() * std::pow(1 + rr * rr * lambda_L(2, h, m), -6.0);
        auto r = resolvent_diag_sum(2, rr, 3);
        EXPECT_NEAR(r.sum, static_cast<double>(s), 1e-7 * r.sum) << rr;
        EXPECT_GE(r.sum, static_cast<double>(s) * (1 - 1e-12));
    }
}

TEST(Resolvent, TruncationSelfConsistent)
{
    for (double rr : {1.0, 0.25, 1.0 / 32}) {
        auto a = resolvent_diag_sum(2, rr, 3);
        auto b = resolvent_diag_sum(2, rr, 3, 1e-9, 2 * a.U);
        EXPECT_LE(a.uncertainty, 1e-9 * a.head);
        EXPECT_NEAR(a.sum, b.sum, 1e-9 * a.sum) << rr;
        EXPECT_NEAR(a.sum, b.sum, a.uncertainty + b.uncertainty + 1e-13 * a.sum) << rr;
    }
}

TEST(Resolvent, SmallRadiusSlope)
{
    std::vector<double> rs, vs;
    for (double rr = 1.0 / 32; rr <= 0.25 + 1e-12; rr *= std::sqrt(2.0)) {
        rs.push_back(1 / rr);
        vs.push_back(resolvent_diag_sum(2, rr, 3).sum);
    }
    auto fit = fit_loglog(rs, vs);
    EXPECT_LE(fit.slope, 4 * 2 + 2 + 0.3);
    EXPECT_GT(fit.slope, 8.0);
}

TEST(BallVolume, LargeRadiusIsWholeSphere)
{
    EXPECT_EQ(ball_volume_mc(2, 1.5, 1000, 1).estimate, 1.0);
    auto w = weight_integral_mc(2, 2, 0, 1000, 1);
    EXPECT_NEAR(w.estimate, 1.0, 1e-12);
    // whole-sphere closed form against plain sampling
    auto exact = weight_integral_mc(3, 2, 2, 1000, 1).estimate;
    auto naive = weight_integral_mc_naive(3, 2, 2, 1'000'000, 5);
    EXPECT_NEAR(naive.estimate, exact, 5 * naive.stderr_);
}

TEST(BallVolume, ImportanceSamplingMatchesNaive)
{
    for (int n : {2, 3})
        for (double r : {0.6, 0.9, 1.2}) {
            auto is = ball_volume_mc(n, r, 400'000, 3);
            auto nv = ball_volume_mc_naive(n, r, 1'000'000, 4);
            double sig = std::hypot(is.stderr_, nv.stderr_);
            EXPECT_NEAR(is.estimate, nv.estimate, 5 * sig) << n << " " << r;
        }
}

TEST(WeightIntegral, ImportanceSamplingMatchesNaive)
{
    for (double alpha : {1.0, 2.0})
        for (double r : {0.8, 1.1}) {
            auto is = weight_integral_mc(2, r, alpha, 400'000, 6);
            auto nv = weight_integral_mc_naive(2, r, alpha, 1'000'000, 7);
            double sig = std::hypot(is.stderr_, nv.stderr_);
            EXPECT_NEAR(is.estimate, nv.estimate, 5 * sig) << alpha << " " << r;
        }
    auto a0 = weight_integral_mc(2, 0.4, 0, 100'000, 9), b0 = ball_volume_mc(2, 0.4, 100'000, 9);
    EXPECT_EQ(a0.estimate, b0.estimate);
    EXPECT_THROW(weight_integral_mc(2, 0.4, 3, 100, 1), std::domain_error);
    auto finite = weight_integral_mc(2, 0.3, 2.5, 200'000, 2);
    EXPECT_TRUE(std::isfinite(finite.estimate));
    EXPECT_TRUE(std::isfinite(finite.stderr_));
}

TEST(BallVolume, SlopeNearTen)
{
    std::vector<double> rs, vs;
    for (double r = 0.15; r <= 0.5 + 1e-12; r += 0.05) {
        rs.push_back(r);
        vs.push_back(ball_volume_mc(2, r, 1'000'000, 100 + rs.size()).estimate);
    }
    EXPECT_NEAR(fit_loglog(rs, vs).slope, 10.0, 0.3);
}

TEST(Fit, ExactPowerLaw)
{
    std::vector<double> x{1, 2, 3, 5}, y;
    for (double v : x) y.push_back(3 * std::pow(v, 2.5));
    auto f = fit_loglog(x, y);
    EXPECT_NEAR(f.slope, 2.5, 1e-12);
    EXPECT_NEAR(f.intercept, std::log(3.0), 1e-12);
}
