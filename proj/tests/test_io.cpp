#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>

#include "axvv/config.hpp"
#include "axvv/io.hpp"

using namespace axvv;

namespace {

std::filesystem::path tmpdir() {
    auto p = std::filesystem::temp_directory_path() / "axvv_io_test";
    std::filesystem::create_directories(p);
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("snapshot round trip is bit exact") {
    Grid g = make_grid(17, 23, 2.5, -1.25, 2.0);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> U(-5.0, 5.0);
    ScalarField f(g);
    for (double& v : f.data()) v = U(rng);
    auto path = tmpdir() / "roundtrip.bin";
    write_snapshot(f, 0.625, path);
    auto [g2, t2] = read_snapshot(path);
    CHECK(t2 == 0.625);
    CHECK(g2.grid() == g);
    auto a = f.data();
    auto b = g2.data();
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
}

TEST_CASE("snapshot rejects corruption with distinct errors") {
    Grid g = make_grid(8, 8, 1.0, 0.0, 1.0);
    ScalarField f(g, 1.0);
    auto path = tmpdir() / "corrupt.bin";
    write_snapshot(f, 0.0, path);
    std::string bytes = slurp(path);

    auto write_bytes = [&](const std::string& b) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(b.data(), static_cast<std::streamsize>(b.size()));
    };

    write_bytes(bytes.substr(0, bytes.size() - 9));
    CHECK_THROWS_WITH_AS(read_snapshot(path), "read_snapshot: truncated payload", IoError);

    std::string bad = bytes;
    bad[0] = 'B';
    write_bytes(bad);
    CHECK_THROWS_WITH_AS(read_snapshot(path), "read_snapshot: bad magic", IoError);

    std::string vers = bytes;
    vers[5] = 9;
    write_bytes(vers);
    CHECK_THROWS_WITH_AS(read_snapshot(path), "read_snapshot: unsupported format version",
                         IoError);

    std::string nan = bytes;
    double q = std::numeric_limits<double>::quiet_NaN();
    std::memcpy(nan.data() + nan.size() - 8, &q, 8);
    write_bytes(nan);
    CHECK_THROWS_WITH_AS(read_snapshot(path), "read_snapshot: non-finite payload", IoError);
}

TEST_CASE("csv writing: row counts and float round trip") {
    auto path = tmpdir() / "table.csv";
    write_csv(path, {"a", "b"}, {{0.1, 1.0}, {2.5, -3.125}, {1e-17, 9.0}});
    std::string text = slurp(path);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);  // header + 3 rows

    auto [header, rows] = read_csv(path);
    CHECK(header == std::vector<std::string>{"a", "b"});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0][0] == 0.1);  // bit-equal after the 17-digit round trip
    CHECK(rows[1][1] == -3.125);
    CHECK(rows[2][0] == 1e-17);

    write_csv(path, {"only", "header"}, {});
    std::string empty_table = slurp(path);
    CHECK(std::count(empty_table.begin(), empty_table.end(), '\n') == 1);
}

TEST_CASE("svg plots: empty, single marker, log-log diagonal") {
    auto dir = tmpdir();

    emit_svg_lineplot({}, AxisScale::linear, AxisScale::linear, dir / "empty.svg");
    std::string empty = slurp(dir / "empty.svg");
    CHECK(empty.find("<svg") != std::string::npos);
    CHECK(empty.find("</svg>") != std::string::npos);
    CHECK(empty.find("<circle") == std::string::npos);

    emit_svg_lineplot({{"one", {{2.0, 3.0}}}}, AxisScale::linear, AxisScale::linear,
                      dir / "one.svg");
    std::string one = slurp(dir / "one.svg");
    std::regex circle("<circle ");
    CHECK(std::distance(std::sregex_iterator(one.begin(), one.end(), circle),
                        std::sregex_iterator()) == 1);

    // Two log-log points on the identity: their pixel coordinates lie on one
    // straight line with the polyline joining them (within a pixel).
    emit_svg_lineplot({{"diag", {{1.0, 1.0}, {0.5, 0.5}}}}, AxisScale::log, AxisScale::log,
                      dir / "diag.svg");
    std::string diag = slurp(dir / "diag.svg");
    std::regex cre("<circle cx=\"([0-9.]+)\" cy=\"([0-9.]+)\"");
    std::vector<std::pair<double, double>> pts;
    for (auto it = std::sregex_iterator(diag.begin(), diag.end(), cre);
         it != std::sregex_iterator(); ++it)
        pts.emplace_back(std::stod((*it)[1]), std::stod((*it)[2]));
    REQUIRE(pts.size() == 2);
    std::smatch pl;
    REQUIRE(std::regex_search(diag, pl,
                              std::regex("<polyline[^>]*points=\"([0-9.,: ]+)\"")));
    std::stringstream ss(pl[1]);
    std::string tok;
    std::vector<std::pair<double, double>> line;
    while (ss >> tok) {
        auto comma = tok.find(',');
        line.emplace_back(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
    }
    REQUIRE(line.size() == 2);
    for (int k = 0; k < 2; ++k) {
        CHECK(std::abs(line[k].first - pts[k].first) <= 1.0);
        CHECK(std::abs(line[k].second - pts[k].second) <= 1.0);
    }

    CHECK_THROWS_AS(emit_svg_lineplot({{"bad", {{0.0, 1.0}}}}, AxisScale::log, AxisScale::linear,
                                      dir / "bad.svg"),
                    IoError);
}

TEST_CASE("snapshot files serve as initial data") {
    Grid g = make_grid(16, 24, 2.0, -1.0, 1.0);
    ScalarField f = gaussian_bump(g, 0.8, 0.0, 0.3, 1.5);
    auto path = tmpdir() / "init.bin";
    write_snapshot(f, 0.0, path);

    InitSpec spec;
    spec.kind = InitKind::snapshot;
    spec.path = path.string();
    ScalarField loaded = make_initial_field(spec, g);
    auto a = f.data();
    auto b = loaded.data();
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);

    Grid other = make_grid(8, 8, 1.0, 0.0, 1.0);
    CHECK_THROWS_AS(make_initial_field(spec, other), InvalidArgument);
}

TEST_CASE("run config parsing rejects unknown keys by name") {
    std::string good =
        "grid.nr = 16\n"
        "grid.nz = 16\n"
        "sim.T = 0.5   # comment\n"
        "init.kind = zero\n";
    RunConfig rc = run_config_from_text(good);
    CHECK(rc.sim.nr == 16);
    CHECK(rc.sim.T == 0.5);
    CHECK(rc.sim.init.kind == InitKind::zero);

    try {
        run_config_from_text(good + "sim.tpyo = 1\n");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("sim.tpyo") != std::string::npos);
    }
    // run-mode configs do not accept sweep keys
    CHECK_THROWS_AS(run_config_from_text(good + "sweep.count = 4\n"), ConfigError);
    CHECK_THROWS_AS(run_config_from_text("grid.nr = x\n"), ConfigError);
    CHECK_THROWS_AS(run_config_from_text("grid.nr\n"), ConfigError);
}
