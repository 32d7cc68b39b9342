#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "ricci/errors.hpp"
#include "ricci/geometry.hpp"

using namespace ricci;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("conformal factor maps") {
    CHECK(u_from_gamma(1.0, Background::E2) == 0.0);
    CHECK(u_from_gamma(kPi / 2, Background::S2) == doctest::Approx(0.0).epsilon(1e-15));
    // ln tanh(1/2), evaluated with 30-digit arithmetic
    CHECK(u_from_gamma(1.0, Background::H2) ==
          doctest::Approx(-0.77193683290530473).epsilon(1e-15));

    CHECK_THROWS_AS(u_from_gamma(0.0, Background::E2), DomainError);
    CHECK_THROWS_AS(u_from_gamma(-1.0, Background::H2), DomainError);
    CHECK_THROWS_AS(u_from_gamma(kPi, Background::S2), DomainError);
}

TEST_CASE("factor/radius round trip") {
    std::mt19937_64 rng(11);
    for (Background bg : {Background::E2, Background::H2, Background::S2}) {
        std::uniform_real_distribution<double> dist(
            0.05, bg == Background::S2 ? 3.0 : 5.0);
        for (int i = 0; i < 1000; ++i) {
            double g = dist(rng);
            double back = gamma_from_u(u_from_gamma(g, bg), bg);
            CHECK(std::abs(back - g) <= 1e-12 * g);
        }
    }
}

TEST_CASE("edge length examples") {
    // tangential: radii add up
    CHECK(edge_length(0, 0, 1, 1, 1, Background::E2) == doctest::Approx(2.0));
    // yamabe with eta = L^2/2 reproduces L
    CHECK(edge_length(0, 0, 4.5, 0, 0, Background::E2) == doctest::Approx(3.0));
    // inversive H2 against the per-scheme formula at gamma = 0.5, eta = 2
    double u = u_from_gamma(0.5, Background::H2);
    double expect = std::acosh(2 * std::sinh(0.5) * std::sinh(0.5) +
                               std::cosh(0.5) * std::cosh(0.5));
    CHECK(edge_length(u, u, 2.0, 1, 1, Background::H2) ==
          doctest::Approx(expect).epsilon(1e-14));
    CHECK(expect == doctest::Approx(1.2026228906679163).epsilon(1e-15));

    CHECK_THROWS_AS(edge_length(0, 0, -1.0, 0, 0, Background::E2),
                    DegenerateLengthError);
    CHECK_THROWS_AS(edge_length(0, 0, 0.2, -1, -1, Background::E2),
                    DegenerateLengthError);
}

TEST_CASE("corner angle examples") {
    auto eq = corner_angles(1, 1, 1, Background::E2);
    for (double t : eq) CHECK(t == doctest::Approx(kPi / 3).epsilon(1e-14));

    auto right = corner_angles(3, 4, 5, Background::E2);
    CHECK(right[2] == doctest::Approx(kPi / 2).epsilon(1e-14));

    auto hyp = corner_angles(1, 1, 1, Background::H2);
    for (double t : hyp) {
        CHECK(t == doctest::Approx(0.91879787217802737).epsilon(1e-14));
        CHECK(t < kPi / 3);
    }

    CHECK_THROWS_AS(corner_angles(1, 1, 3, Background::E2),
                    TriangleInequalityError);
    CHECK_THROWS_AS(corner_angles(0.5, 0.5, 3.2, Background::S2),
                    TriangleInequalityError);
}

TEST_CASE("corner angles commute with permutations") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(0.5, 1.4);
    for (Background bg : {Background::E2, Background::H2, Background::S2}) {
        for (int i = 0; i < 200; ++i) {
            double a = dist(rng), b = dist(rng), c = dist(rng);
            if (a >= b + c || b >= a + c || c >= a + b) continue;
            auto t1 = corner_angles(a, b, c, bg);
            auto t2 = corner_angles(b, c, a, bg);
            CHECK(t1[0] == doctest::Approx(t2[2]).epsilon(1e-14));
            CHECK(t1[1] == doctest::Approx(t2[0]).epsilon(1e-14));
            CHECK(t1[2] == doctest::Approx(t2[1]).epsilon(1e-14));
        }
    }
}

TEST_CASE("angle sums per background") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(0.6, 1.3);
    for (int i = 0; i < 500; ++i) {
        double a = dist(rng), b = dist(rng), c = dist(rng);
        if (a >= b + c || b >= a + c || c >= a + b) continue;
        auto te = corner_angles(a, b, c, Background::E2);
        CHECK(te[0] + te[1] + te[2] == doctest::Approx(kPi).epsilon(1e-12));
        auto th = corner_angles(a, b, c, Background::H2);
        CHECK(th[0] + th[1] + th[2] < kPi);
        auto ts = corner_angles(a, b, c, Background::S2);
        CHECK(ts[0] + ts[1] + ts[2] > kPi);
    }
}

TEST_CASE("tetrahedron curvature") {
    Mesh m = fixtures::unit_tetra();
    auto metric = init_circle_packing(m, embedded_edge_lengths(m), Scheme::yamabe,
                                      Background::E2);
    auto state = compute_state(m, metric, conformal_factors(metric));
    auto K = vertex_curvatures(m, state);
    for (double k : K.K) CHECK(k == doctest::Approx(kPi).epsilon(1e-14));

    double residual = gauss_bonnet_residual(m, K, total_area(m, state, Background::E2),
                                            Background::E2);
    CHECK(std::abs(residual) < 1e-12);
}

TEST_CASE("flat grid interior curvature is zero") {
    Mesh m = fixtures::grid_disk(5);
    auto metric = init_circle_packing(m, embedded_edge_lengths(m), Scheme::yamabe,
                                      Background::E2);
    auto state = compute_state(m, metric, conformal_factors(metric));
    auto K = vertex_curvatures(m, state);
    for (int v = 0; v < m.n_vertices(); ++v)
        if (!m.vertex_on_boundary(v)) CHECK(std::abs(K.K[v]) < 1e-12);
}

TEST_CASE("gauss-bonnet residual vanishes on random metrics") {
    auto run = [](const Mesh& m, Background bg, std::uint64_t seed) {
        auto metric = fixtures::random_valid_metric(m, bg, seed);
        auto state = compute_state(m, metric, conformal_factors(metric));
        auto K = vertex_curvatures(m, state);
        return gauss_bonnet_residual(m, K, total_area(m, state, bg), bg);
    };
    Mesh torus = fixtures::torus(8, 8);
    Mesh g2 = fixtures::genus2(8);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        CHECK(std::abs(run(torus, Background::E2, seed)) < 1e-9);
        CHECK(std::abs(run(g2, Background::H2, seed)) < 1e-9);
        CHECK(std::abs(run(g2, Background::S2, seed)) < 1e-9);
    }
}

TEST_CASE("eta/lambda conversions") {
    CHECK(eta_from_lambda(0, 1, 1) == doctest::Approx(1.0));
    CHECK(eta_from_lambda(0.7, 0, 1) == doctest::Approx(std::exp(0.7) / 2));
    CHECK(eta_from_lambda(std::log(2.0), 1, 1) == doctest::Approx(1.25));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int i = 0; i < 300; ++i) {
        double lam = dist(rng);
        CHECK(lambda_from_eta(eta_from_lambda(lam, 0, 1), 0, 1) ==
              doctest::Approx(lam).epsilon(1e-12));
        CHECK(lambda_from_eta(eta_from_lambda(std::abs(lam), 1, 1), 1, 1) ==
              doctest::Approx(std::abs(lam)).epsilon(1e-10));
        CHECK(lambda_from_eta(eta_from_lambda(lam, -1, 1), -1, 1) ==
              doctest::Approx(lam).epsilon(1e-12));
    }
    CHECK_THROWS_AS(lambda_from_eta(0.5, 1, 1), InverseUndefinedError);
    CHECK_THROWS_AS(lambda_from_eta(-1.0, 0, 1), InverseUndefinedError);
}

TEST_CASE("initial packing on the unit tetrahedron") {
    Mesh m = fixtures::unit_tetra();
    auto lengths = embedded_edge_lengths(m);

    auto yamabe = init_circle_packing(m, lengths, Scheme::yamabe, Background::E2);
    for (double g : yamabe.gamma) CHECK(g == doctest::Approx(1.0));
    for (double e : yamabe.eta) CHECK(e == doctest::Approx(0.5).epsilon(1e-12));

    auto inv = init_circle_packing(m, lengths, Scheme::inversive, Background::E2);
    for (double g : inv.gamma) CHECK(g == doctest::Approx(1.0 / 3.0));
    for (double e : inv.eta) CHECK(e == doctest::Approx(3.5).epsilon(1e-12));

    auto virt = init_circle_packing(m, lengths, Scheme::virtual_radius,
                                    Background::E2);
    for (double g : virt.gamma) CHECK(g == doctest::Approx(1.0));
    for (double e : virt.eta) CHECK(e == doctest::Approx(1.5).epsilon(1e-12));

    // all three reproduce the unit lengths
    for (const auto& metric : {yamabe, inv, virt}) {
        auto l = edge_lengths(m, metric, conformal_factors(metric));
        for (double x : l) CHECK(x == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("initial packing reproduces lengths in H2 and S2") {
    Mesh m = fixtures::unit_tetra();
    std::vector<double> lengths(m.n_edges(), 0.8);
    for (Background bg : {Background::H2, Background::S2}) {
        for (Scheme s : {Scheme::inversive, Scheme::yamabe, Scheme::virtual_radius}) {
            auto metric = init_circle_packing(m, lengths, s, bg);
            auto l = edge_lengths(m, metric, conformal_factors(metric));
            for (double x : l) CHECK(x == doctest::Approx(0.8).epsilon(1e-13));
        }
    }
}

TEST_CASE("scheme consistency: unified formula vs per-scheme forms") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> gdist(0.2, 2.0);
    std::uniform_real_distribution<double> edist(0.2, 3.0);

    for (int i = 0; i < 1000; ++i) {
        double gi = gdist(rng), gj = gdist(rng), eta = edist(rng);
        double ue_i = std::log(gi), ue_j = std::log(gj);

        // E2 reductions
        double l_tan = edge_length(ue_i, ue_j, 1.0, 1, 1, Background::E2);
        CHECK(l_tan == doctest::Approx(gi + gj).epsilon(1e-12));
        double l_yam = edge_length(ue_i, ue_j, eta, 0, 0, Background::E2);
        CHECK(l_yam * l_yam == doctest::Approx(2 * eta * gi * gj).epsilon(1e-12));
        double vsq = 2 * eta * gi * gj - gi * gi - gj * gj;
        if (vsq > 1e-6) {
            double l_vir = edge_length(ue_i, ue_j, eta, -1, -1, Background::E2);
            CHECK(l_vir * l_vir == doctest::Approx(vsq).epsilon(1e-12));
        }

        // H2 inversive
        double uh_i = u_from_gamma(gi, Background::H2);
        double uh_j = u_from_gamma(gj, Background::H2);
        double rhs = eta * std::sinh(gi) * std::sinh(gj) +
                     std::cosh(gi) * std::cosh(gj);
        CHECK(std::cosh(edge_length(uh_i, uh_j, eta, 1, 1, Background::H2)) ==
              doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("metric json round trip") {
    Mesh m = fixtures::unit_tetra();
    auto metric = fixtures::random_valid_metric(m, Background::H2, 99);
    auto u = conformal_factors(metric);
    std::string text = write_metric_json(m, metric, &u);
    std::vector<double> u_back;
    auto back = read_metric_json(text, m, &u_back);
    CHECK(back.bg == metric.bg);
    CHECK(back.scheme == metric.scheme);
    CHECK(back.epsilon == metric.epsilon);
    REQUIRE(u_back.size() == u.size());
    for (size_t i = 0; i < u.size(); ++i) CHECK(u_back[i] == u[i]);  // bit-exact
    for (int e = 0; e < m.n_edges(); ++e) CHECK(back.eta[e] == metric.eta[e]);
    for (int v = 0; v < m.n_vertices(); ++v) CHECK(back.gamma[v] == metric.gamma[v]);
}
