#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <complex>
#include <random>
#include <thread>

#include "gerbegw/cyclotomic.hpp"

using namespace gerbegw;

namespace {

// Independent oracle: Phi_N by naive division of x^N - 1 by the product of
// the lower Phi_d, with its own polynomial arithmetic.
std::vector<long> phi_oracle(unsigned n) {
    std::map<unsigned, std::vector<long>> memo;
    std::function<std::vector<long>(unsigned)> rec = [&](unsigned m) -> std::vector<long> {
        auto it = memo.find(m);
        if (it != memo.end()) return it->second;
        std::vector<long> num(m + 1, 0);
        num[0] = -1;
        num[m] = 1;
        for (unsigned d = 1; d < m; ++d) {
            if (m % d != 0) continue;
            auto den = rec(d);
            std::vector<long> q(num.size() - den.size() + 1, 0);
            for (size_t i = q.size(); i-- > 0;) {
                long c = num[i + den.size() - 1] / den.back();
                q[i] = c;
                for (size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
            }
            num = q;
        }
        memo[m] = num;
        return num;
    };
    return rec(n);
}

CycNumber random_cyc(std::mt19937& rng, unsigned max_level, long max_coeff = 10) {
    std::uniform_int_distribution<unsigned> lev(1, max_level);
    std::uniform_int_distribution<long> num(-max_coeff, max_coeff);
    std::uniform_int_distribution<long> den(1, 12);
    unsigned level = lev(rng);
    std::vector<Rational> coeffs(cyclotomic_degree(level));
    for (auto& c : coeffs) c = Rational(num(rng), den(rng));
    return CycNumber(level, std::move(coeffs));
}

} // namespace

TEST_CASE("cyclotomic polynomials match the divide-down oracle") {
    CHECK(cyclotomic_polynomial(1) == std::vector<mpz_class>{-1, 1});  // x - 1
    CHECK(cyclotomic_polynomial(2) == std::vector<mpz_class>{1, 1});   // x + 1
    // Phi_12 = x^4 - x^2 + 1, recomputed independently.
    auto expected12 = phi_oracle(12);
    CHECK(expected12 == std::vector<long>{1, 0, -1, 0, 1});
    auto got12 = cyclotomic_polynomial(12);
    REQUIRE(got12.size() == expected12.size());
    for (size_t i = 0; i < got12.size(); ++i) CHECK(got12[i] == expected12[i]);

    for (unsigned n = 1; n <= 24; ++n) {
        auto expect = phi_oracle(n);
        auto got = cyclotomic_polynomial(n);
        REQUIRE(got.size() == expect.size());
        for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == expect[i]);
    }
}

TEST_CASE("roots of unity reduce canonically") {
    CHECK(root_of_unity(0, 5) == CycNumber(1));
    CHECK(root_of_unity(1, 2) == CycNumber(-1));
    // zeta_3^2 = -1 - zeta_3 in the power basis of Q[x]/(x^2+x+1)
    CycNumber z32 = root_of_unity(2, 3);
    REQUIRE(z32.coeffs().size() == 2);
    CHECK(z32.coeffs()[0] == Rational(-1));
    CHECK(z32.coeffs()[1] == Rational(-1));
    CHECK(root_of_unity(-1, 3) == root_of_unity(2, 3));
    CHECK(root_of_unity(7, 5) == root_of_unity(2, 5));
}

TEST_CASE("field arithmetic identities") {
    CHECK(root_of_unity(1, 3) + root_of_unity(2, 3) == CycNumber(-1));
    CHECK(root_of_unity(1, 4) * root_of_unity(1, 4) == CycNumber(-1));
    CycNumber half_z6 = root_of_unity(1, 6) * Rational(1, 2);
    CHECK(half_z6 + half_z6 == root_of_unity(1, 6));
    CHECK(cyc_neg(root_of_unity(1, 4)) + root_of_unity(1, 4) == CycNumber());
}

TEST_CASE("level lifting") {
    CycNumber minus_one = root_of_unity(1, 2);
    CycNumber lifted = lift_level(minus_one, 4);
    CHECK(lifted.level() == 4);
    CHECK(lifted == root_of_unity(2, 4));
    CHECK(lifted.as_rational().value() == Rational(-1));
    CHECK(lift_level(root_of_unity(1, 3), 6) == root_of_unity(2, 6));
    CHECK_THROWS_AS(lift_level(root_of_unity(1, 3), 4), IncompatibleLevel);
}

TEST_CASE("rational detection") {
    CycNumber sum = CycNumber(1) + root_of_unity(1, 3) + root_of_unity(2, 3);
    REQUIRE(sum.as_rational());
    CHECK(sum.as_rational().value() == Rational(0));
    CHECK(!root_of_unity(1, 4).as_rational());
    CHECK(CycNumber(Rational(-3, 7)).lifted(12).as_rational().value() == Rational(-3, 7));
}

TEST_CASE("complex embedding hits the unit circle") {
    auto i = complex_embedding(root_of_unity(1, 4));
    CHECK(std::abs(i - std::complex<double>(0, 1)) < 1e-12);
    auto z6 = complex_embedding(root_of_unity(1, 6));
    CHECK(std::abs(z6 - std::complex<double>(0.5, 0.8660254037844386)) < 1e-12);
    auto m1 = complex_embedding(CycNumber(-1));
    CHECK(std::abs(m1 - std::complex<double>(-1, 0)) < 1e-12);
}

TEST_CASE("zeta_N^N = 1 and the geometric sum vanishes, N <= 24") {
    for (unsigned n = 1; n <= 24; ++n) {
        CycNumber z = root_of_unity(1, n);
        CycNumber pw(1);
        for (unsigned k = 0; k < n; ++k) pw *= z;
        CHECK(pw == CycNumber(1));
        if (n >= 2) {
            CycNumber s;
            for (unsigned k = 0; k < n; ++k) s += root_of_unity(k, n);
            CHECK(s.is_zero());
        }
    }
}

TEST_CASE("canonical equality under random arithmetic") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 200; ++trial) {
        CycNumber a = random_cyc(rng, 24);
        CycNumber b = random_cyc(rng, 24);
        CHECK((a + b) - b == a);
        CHECK(a * b == b * a);
        CHECK((a + b) * a == a * a + b * a);
    }
}

TEST_CASE("embedding is a ring homomorphism to 1e-10") {
    std::mt19937 rng(777);
    for (int trial = 0; trial < 100; ++trial) {
        CycNumber a = random_cyc(rng, 24, 100);
        CycNumber b = random_cyc(rng, 24, 100);
        auto ea = complex_embedding(a), eb = complex_embedding(b);
        CHECK(std::abs(complex_embedding(a + b) - (ea + eb)) < 1e-10);
        CHECK(std::abs(complex_embedding(a * b) - ea * eb) < 1e-10);
    }
}

TEST_CASE("field inverse") {
    std::mt19937 rng(99);
    CHECK(root_of_unity(1, 5).inverse() == root_of_unity(4, 5));
    CHECK_THROWS_AS(CycNumber().inverse(), DomainError);
    for (int trial = 0; trial < 50; ++trial) {
        CycNumber a = random_cyc(rng, 16);
        if (a.is_zero()) continue;
        CHECK(a * a.inverse() == CycNumber(1));
        CHECK(a / a == CycNumber(1));
    }
}

TEST_CASE("memo tables are safe under concurrent first use") {
    std::vector<std::thread> workers;
    std::atomic<bool> ok{true};
    for (int t = 0; t < 8; ++t) {
        workers.emplace_back([&ok, t] {
            for (unsigned n = 1; n <= 30; ++n) {
                if (cyclotomic_polynomial(n).size() != cyclotomic_degree(n) + 1) ok = false;
                CycNumber z = root_of_unity(t + 1, n);
                CycNumber pw(1);
                for (unsigned k = 0; k < n; ++k) pw *= z;
                if (!(pw == CycNumber(1))) ok = false;
            }
        });
    }
    for (auto& w : workers) w.join();
    CHECK(ok);
}

TEST_CASE("cross-level equality is value equality") {
    CHECK(CycNumber(Rational(1, 2)) == CycNumber(Rational(1, 2)).lifted(8));
    CHECK(root_of_unity(1, 2) == root_of_unity(3, 6) * root_of_unity(0, 2) * CycNumber(1));
    CHECK(root_of_unity(2, 6) == root_of_unity(1, 3));
}
