#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pfront/config.hpp"
#include "pfront/io.hpp"

using namespace pfront;

TEST_CASE("minimal config gets the documented defaults") {
    auto cfg = parse_config("[model]\ndim = 1\ntheta0 = 0.3\n");
    CHECK(cfg.L == 40.0);
    CHECK(cfg.n_xi == 2048);
    CHECK(cfg.tol == 1e-10);
    CHECK(cfg.max_iters == 50);
    auto g = cfg.cylinder_grid();
    CHECK(g.n_y[0] == 1);  // homogeneous medium
}

TEST_CASE("modes switch the default y-resolution on") {
    auto cfg = parse_config("[model]\ndim = 2\ntheta0 = 0.3\nmode = 1 0 0.08 0\n");
    auto g = cfg.cylinder_grid();
    CHECK(g.n_y[0] == 16);
    CHECK(g.n_y[1] == 1);
}

TEST_CASE("unknown keys and sections are rejected with line numbers") {
    try {
        parse_config("[model]\ntheta0 = 0.3\nthetaO = 0.4\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        CHECK(std::string(e.what()).find("thetaO") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("[mdoel]\ntheta0 = 0.3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("theta0 = 0.3\n"), ConfigError);  // key outside a section
}

TEST_CASE("duplicate keys name both lines") {
    try {
        parse_config("[model]\ntheta0 = 0.3\ndim = 1\ntheta0 = 0.4\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string w = e.what();
        CHECK(w.find("theta0") != std::string::npos);
        CHECK(w.find("2") != std::string::npos);
        CHECK(w.find("4") != std::string::npos);
    }
}

TEST_CASE("semantic validation: experiment levels against the theta range") {
    const std::string base = "[model]\ndim = 2\ntheta0 = 0.3\nmode = 1 0 0.1 0\n[cauchy]\n";
    CHECK_NOTHROW(parse_config(base + "experiment = vR 10 0.6 50\n"));
    try {
        parse_config(base + "experiment = omegaR 10 0.3 50\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string w = e.what();
        CHECK(w.find("alpha") != std::string::npos);
        CHECK(w.find("theta") != std::string::npos);
    }
}

TEST_CASE("dependencies: the sandwich verdict needs a sweep") {
    const std::string text =
        "[model]\ndim = 2\ntheta0 = 0.3\nmode = 1 0 0.08 0\n"
        "[cauchy]\nexperiment = vR 12 0.8 60\n[verify]\nsandwich = on\n";
    CHECK_THROWS_AS(parse_config(text), ConfigError);
    CHECK_NOTHROW(parse_config(text + "[sweep]\nangles = 32\n"));
}

TEST_CASE("front binary: exact layout and round trip") {
    CylinderGrid g;
    g.L = 12.0;
    g.n_xi = 96;
    g.dim = 2;
    g.n_y = {16, 1};
    PulsatingFront f;
    f.e = {0.6, 0.8};
    f.c = 0.321;
    f.profile = ProfileField(g);
    for (std::size_t k = 0; k < f.profile.values.size(); ++k) f.profile.values[k] = std::sin(0.01 * k);

    const std::string path = std::filesystem::temp_directory_path() / "pfront_test.pfr";
    write_front_binary(path, f, 0xabcdef12345678ull);

    // Byte-level layout: magic, u32 N, u32 n_xi, u32 n_y per dim, f64 L.
    std::ifstream is(path, std::ios::binary);
    char magic[4];
    is.read(magic, 4);
    CHECK(std::string(magic, 4) == "PFR1");
    std::uint32_t words[4];
    is.read(reinterpret_cast<char*>(words), sizeof words);
    CHECK(words[0] == 2);
    CHECK(words[1] == 96);
    CHECK(words[2] == 16);
    CHECK(words[3] == 1);
    double L = 0;
    is.read(reinterpret_cast<char*>(&L), sizeof L);
    CHECK(L == 12.0);

    auto f2 = read_front_binary(path);
    CHECK(f2.c == f.c);
    CHECK(f2.e[0] == f.e[0]);
    CHECK(f2.e[1] == f.e[1]);
    CHECK(f2.profile.grid.n_xi == 96);
    REQUIRE(f2.profile.values.size() == f.profile.values.size());
    for (std::size_t k = 0; k < f.profile.values.size(); ++k)
        CHECK(f2.profile.values[k] == f.profile.values[k]);
    std::filesystem::remove(path);
}

TEST_CASE("csv writers are deterministic") {
    SpeedSweep sweep;
    sweep.grid = CylinderGrid{};
    for (int j = 0; j < 5; ++j) {
        SweepEntry e;
        e.angle = 0.1 * j;
        e.c = 0.28 + 1e-7 * j;
        e.residual_norm = 1e-11;
        e.identity_residual = 3e-5;
        e.mu_plus = 0.707;
        e.mu_minus = 0.707;
        e.newton_iters = j;
        sweep.entries.push_back(e);
    }
    const auto p1 = std::filesystem::temp_directory_path() / "pfront_sweep1.csv";
    const auto p2 = std::filesystem::temp_directory_path() / "pfront_sweep2.csv";
    write_sweep_csv(p1, sweep, 42);
    write_sweep_csv(p2, sweep, 42);
    std::ifstream a(p1), b(p2);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().find("angle,c,residual,identity_residual,mu_plus,mu_minus,newton_iters") !=
          std::string::npos);
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

TEST_CASE("floats are serialized with 9 significant digits in CSV") {
    CHECK(fmt_g(0.123456789123) == "0.123456789");
    CHECK(fmt_g(1.0 / 3.0) == "0.333333333");
    CHECK(fmt_g(2.0) == "2");
}
