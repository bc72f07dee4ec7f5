#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mems/basis.hpp"

using namespace mems;
namespace {

constexpr double kPi = std::numbers::pi;

SpectralBasis navier_interval_basis(int N, int K, double tau = 0.0, double L = 1.0) {
    auto spec = make_spec(1.0, tau, 0.0, Domain::interval(L), BoundaryCondition::Navier, 1);
    return compute_spectrum(spec, build_grid(spec.domain, 1, N), K);
}

// root of cos(mu)*cosh(mu) = 1 in (4, 5), independent bisection oracle
double clamped_beam_mu1() {
    auto f = [](double mu) { return std::cos(mu) * std::cosh(mu) - 1.0; };
    double lo = 4.0, hi = 5.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double bessel_j0_zero(double lo, double hi) {
    auto f = [](double x) { return std::cyl_bessel_j(0.0, x); };
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

Matrix pinned_second_difference(int N, double h) {
    Matrix T = Matrix::Zero(N - 1, N - 1);
    for (int i = 0; i < N - 1; ++i) {
        T(i, i) = -2.0 / (h * h);
        if (i > 0) T(i, i - 1) = 1.0 / (h * h);
        if (i < N - 2) T(i, i + 1) = 1.0 / (h * h);
    }
    return T;
}

} // namespace

TEST_SUITE("spectrum") {

TEST_CASE("grid: interval trapezoid weights and measure") {
    const Grid g = build_grid(Domain::interval(1.0), 1, 16);
    const double h = 1.0 / 16;
    CHECK(g.spacing == doctest::Approx(h));
    CHECK(g.weights[0] == doctest::Approx(h / 2));
    CHECK(g.weights[16] == doctest::Approx(h / 2));
    for (int i = 1; i < 16; ++i) CHECK(g.weights[i] == doctest::Approx(h));
    CHECK(std::abs(g.weights.sum() - 1.0) < 1e-12);
}

TEST_CASE("grid: radial weight vanishes at the origin, measure exact") {
    for (int n : {2, 3, 7}) {
        const Grid g = build_grid(Domain::radial_ball(n), n, 16);
        CHECK(g.weights[0] == 0.0);
        const double vol = domain_measure(Domain::radial_ball(n), n);
        CHECK(std::abs(g.weights.sum() - vol) < 1e-12 * vol);
        CHECK(g.weights.minCoeff() >= 0.0);
    }
}

TEST_CASE("grid: rejects coarse resolutions and dimension mismatch") {
    CHECK_THROWS_AS(build_grid(Domain::interval(1.0), 1, 8), Error);
    try {
        build_grid(Domain::interval(1.0), 1, 8);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ResolutionTooCoarse);
    }
    try {
        build_grid(Domain::radial_ball(3), 2, 32);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("spec: dimension gate") {
    CHECK_NOTHROW(make_spec(1.0, 0.0, 0.0, Domain::radial_ball(7), BoundaryCondition::Navier, 7));
    CHECK_THROWS_AS(make_spec(1.0, 0.0, 0.0, Domain::radial_ball(8), BoundaryCondition::Navier, 8), Error);
    try {
        make_spec(1.0, 0.0, 0.0, Domain::radial_ball(8), BoundaryCondition::Dirichlet, 8);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionNotSupported);
    }
}

TEST_CASE("assembly: pinned interval stiffness is the squared second difference") {
    const int N = 32;
    const double h = 1.0 / N;
    auto spec = make_spec(1.0, 0.0, 0.0, Domain::interval(1.0), BoundaryCondition::Navier, 1);
    const auto op = assemble_operator(spec, build_grid(spec.domain, 1, N));
    const Matrix T = pinned_second_difference(N, h);
    const Matrix expect = h * (T * T);
    CHECK((op.A - expect).cwiseAbs().maxCoeff() < 1e-10 * expect.cwiseAbs().maxCoeff());
    // mass = h * identity on interior nodes
    CHECK((op.B - h * Matrix::Identity(N - 1, N - 1)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assembly: symmetry defect is exactly zero") {
    for (auto bc : {BoundaryCondition::Dirichlet, BoundaryCondition::Navier}) {
        auto s1 = make_spec(2.0, 0.7, 0.0, Domain::interval(1.5), bc, 1);
        auto op1 = assemble_operator(s1, build_grid(s1.domain, 1, 24));
        CHECK((op1.A - op1.A.transpose()).cwiseAbs().maxCoeff() == 0.0);
        auto s2 = make_spec(0.3, 1.1, 0.0, Domain::radial_ball(3), bc, 3);
        auto op2 = assemble_operator(s2, build_grid(s2.domain, 3, 24));
        CHECK((op2.A - op2.A.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("assembly: linear in beta and tau") {
    const Grid g = build_grid(Domain::interval(1.0), 1, 24);
    auto A = [&](double beta, double tau) {
        return assemble_operator(
                   make_spec(beta, tau, 0.0, Domain::interval(1.0), BoundaryCondition::Dirichlet, 1), g)
            .A;
    };
    const Matrix lap = A(1.0, 2.0) - A(1.0, 1.0);
    const double scale = A(1.0, 1.0).cwiseAbs().maxCoeff();
    CHECK((A(1.0, 1.0) - (A(1.0, 0.0) + lap)).cwiseAbs().maxCoeff() < 1e-12 * scale);
    CHECK((A(2.0, 0.0) - 2.0 * A(1.0, 0.0)).cwiseAbs().maxCoeff() < 1e-12 * scale);
}

TEST_CASE("spectrum: pinned interval matches the discrete closed form") {
    const int N = 64, K = 8;
    for (double tau : {0.0, 1.0}) {
        const auto basis = navier_interval_basis(N, K, tau);
        const double h = 1.0 / N;
        for (int k = 1; k <= K; ++k) {
            const double mu = 4.0 * std::pow(std::sin(k * kPi * h / 2), 2) / (h * h);
            const double expect = mu * mu + tau * mu;
            CHECK(std::abs(basis.eigenvalues[k - 1] - expect) < 1e-9 * expect);
        }
    }
}

TEST_CASE("spectrum: grid refinement improves pinned eigenvalues by >= 3x") {
    const int K = 8;
    const auto coarse = navier_interval_basis(128, K);
    const auto fine = navier_interval_basis(256, K);
    for (int k = 1; k <= K / 2; ++k) {
        const double exact = std::pow(k * kPi, 4);
        const double e1 = std::abs(coarse.eigenvalues[k - 1] - exact) / exact;
        const double e2 = std::abs(fine.eigenvalues[k - 1] - exact) / exact;
        CHECK(e1 / e2 >= 3.0);
    }
}

TEST_CASE("spectrum: clamped interval fundamental eigenvalue hits the beam equation") {
    auto spec = make_spec(1.0, 0.0, 0.0, Domain::interval(1.0), BoundaryCondition::Dirichlet, 1);
    const double l128 = compute_spectrum(spec, build_grid(spec.domain, 1, 128), 4).eigenvalues[0];
    const double l256 = compute_spectrum(spec, build_grid(spec.domain, 1, 256), 4).eigenvalues[0];
    const double extrap = (4.0 * l256 - l128) / 3.0;
    const double mu = std::pow(extrap, 0.25);
    CHECK(std::abs(std::cos(mu) * std::cosh(mu) - 1.0) < 5e-3);
    const double mu1 = clamped_beam_mu1();
    CHECK(std::abs(extrap - std::pow(mu1, 4)) < 1e-3 * std::pow(mu1, 4));
}

TEST_CASE("spectrum: pinned disc eigenvalues approach fourth powers of Bessel zeros") {
    auto spec = make_spec(1.0, 0.0, 0.0, Domain::radial_ball(2), BoundaryCondition::Navier, 2);
    const auto basis = compute_spectrum(spec, build_grid(spec.domain, 2, 512), 2);
    const double z1 = bessel_j0_zero(2.0, 3.0);
    const double z2 = bessel_j0_zero(5.0, 6.0);
    CHECK(std::abs(basis.eigenvalues[0] - std::pow(z1, 4)) < 1e-4 * std::pow(z1, 4));
    CHECK(std::abs(basis.eigenvalues[1] - std::pow(z2, 4)) < 1e-4 * std::pow(z2, 4));
}

TEST_CASE("spectrum: one-dimensional ball keeps the center as an unknown") {
    // even functions on (-1,1): pinned eigenfunctions cos((k-1/2) pi r)
    auto spec = make_spec(1.0, 0.0, 0.0, Domain::radial_ball(1), BoundaryCondition::Navier, 1);
    const Grid g = build_grid(spec.domain, 1, 512);
    CHECK(g.weights[0] > 0.0);
    const auto basis = compute_spectrum(spec, g, 4);
    for (int k = 1; k <= 4; ++k) {
        const double exact = std::pow((k - 0.5) * kPi, 4);
        CHECK(std::abs(basis.eigenvalues[k - 1] - exact) < 2e-4 * exact);
    }
    // center value is reconstructed, nonzero, with zero slope
    CHECK(std::abs(basis.modes(0, 0)) > 0.5);
    CHECK(std::abs(basis.modes(1, 0) - basis.modes(0, 0)) < 5e-4);
}

TEST_CASE("spectrum: truncation guard") {
    auto spec = make_spec(1.0, 0.0, 0.0, Domain::interval(1.0), BoundaryCondition::Navier, 1);
    const Grid g = build_grid(spec.domain, 1, 32);
    CHECK_THROWS_AS(compute_spectrum(spec, g, 9), Error);
}

TEST_CASE("basis invariants across the domain/bc matrix") {
    std::vector<OperatorSpec> specs;
    for (auto bc : {BoundaryCondition::Dirichlet, BoundaryCondition::Navier}) {
        specs.push_back(make_spec(1.0, 0.0, 0.0, Domain::interval(1.0), bc, 1));
        specs.push_back(make_spec(1.0, 1.0, 0.0, Domain::interval(2.0), bc, 1));
        for (int n : {2, 3, 7})
            specs.push_back(make_spec(1.0, 0.5, 0.0, Domain::radial_ball(n), bc, n));
    }
    for (const auto& spec : specs) {
        const Grid g = build_grid(spec.domain, spec.dim_n, 64);
        const auto basis = compute_spectrum(spec, g, 6);
        CHECK(basis.eigenvalues[0] > 0.0);
        const double lamK = basis.eigenvalues[basis.K - 1];
        for (int i = 0; i < basis.K; ++i) {
            if (i > 0) CHECK(basis.eigenvalues[i] >= basis.eigenvalues[i - 1]);
            for (int j = 0; j < basis.K; ++j) {
                const double l2 = l2_inner_product(basis.eigenfunction(i), basis.eigenfunction(j), g);
                CHECK(std::abs(l2 - (i == j ? 1.0 : 0.0)) < 1e-8);
                const double en =
                    energy_inner_product(basis.eigenfunction(i), basis.eigenfunction(j), spec, g);
                CHECK(std::abs(en - (i == j ? basis.eigenvalues[i] : 0.0)) < 1e-6 * lamK);
            }
            // Rayleigh-quotient consistency
            const double ri = energy_inner_product(basis.eigenfunction(i), basis.eigenfunction(i), spec, g) -
                              basis.eigenvalues[i] *
                                  l2_inner_product(basis.eigenfunction(i), basis.eigenfunction(i), g);
            CHECK(std::abs(ri) < 1e-6 * lamK);
            // discrete boundary conditions hold exactly
            CHECK(basis.modes(basis.points() - 1, i) == 0.0);
            if (spec.domain.kind == DomainKind::Interval) CHECK(basis.modes(0, i) == 0.0);
        }
    }
}

TEST_CASE("inner products: bilinearity and mismatch errors") {
    const auto basis = navier_interval_basis(64, 4);
    const Grid& g = basis.grid;
    const Vector ones = Vector::Ones(g.points());
    CHECK(l2_inner_product(ones, ones, g) == doctest::Approx(1.0));
    const Vector zero = Vector::Zero(g.points());
    CHECK(energy_inner_product(zero, basis.eigenfunction(0), basis.spec, g) == 0.0);
    Vector bad(g.points() - 1);
    bad.setZero();
    CHECK_THROWS_AS(l2_inner_product(bad, bad, g), Error);
    CHECK_THROWS_AS(synthesize(basis, Vector::Zero(3)), Error);
    CHECK_THROWS_AS(analyze(basis, bad), Error);
}

TEST_CASE("analyze/synthesize round trips") {
    const auto basis = navier_interval_basis(96, 6);
    const Vector e3 = analyze(basis, basis.eigenfunction(2));
    for (int k = 0; k < 6; ++k)
        CHECK(std::abs(e3[k] - (k == 2 ? 1.0 : 0.0)) < 1e-8);
    CHECK(synthesize(basis, Vector::Zero(6)).cwiseAbs().maxCoeff() == 0.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Vector c(6);
        for (int k = 0; k < 6; ++k) c[k] = U(rng);
        const Vector back = analyze(basis, synthesize(basis, c));
        CHECK((back - c).norm() < 1e-10);
    }
    // synthesize . analyze restores members of the span
    const Vector u = synthesize(basis, Vector::Ones(6));
    const Vector u2 = synthesize(basis, analyze(basis, u));
    CHECK((u - u2).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("embedding constant: closed form, monotonicity, sign invariance") {
    const auto b1 = navier_interval_basis(256, 1);
    const double closed = std::sqrt(2.0 / (1.0 + std::pow(kPi, 8)));
    CHECK(std::abs(embedding_constant(b1) - closed) < 2e-3 * closed);

    // nested truncations of one basis: the nodal sum gains nonnegative terms
    const auto b8 = navier_interval_basis(256, 8);
    double prev = 0.0;
    for (int K : {1, 2, 4, 8}) {
        SpectralBasis sub = b8;
        sub.K = K;
        sub.eigenvalues = b8.eigenvalues.head(K);
        sub.modes = b8.modes.leftCols(K);
        sub.finalize();
        const double c = embedding_constant(sub);
        CHECK(c >= prev);
        prev = c;
    }

    auto flipped = navier_interval_basis(256, 4);
    const double before = embedding_constant(flipped);
    flipped.modes.col(1) *= -1.0;
    flipped.finalize();
    CHECK(embedding_constant(flipped) == before);

    // within a degenerate cluster only the spanned subspace matters
    auto twin = navier_interval_basis(256, 4);
    twin.eigenvalues[2] = twin.eigenvalues[1]; // synthetic double eigenvalue
    const double c_before = embedding_constant(twin);
    const double ang = 0.7;
    const Vector a = twin.modes.col(1), b = twin.modes.col(2);
    twin.modes.col(1) = std::cos(ang) * a + std::sin(ang) * b;
    twin.modes.col(2) = -std::sin(ang) * a + std::cos(ang) * b;
    twin.finalize();
    CHECK(embedding_constant(twin) == doctest::Approx(c_before).epsilon(1e-13));
}

} // TEST_SUITE
