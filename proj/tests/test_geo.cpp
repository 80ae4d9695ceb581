#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "geonas/errors.hpp"
#include "geonas/geo.hpp"
#include "geonas/rng.hpp"

using namespace geonas;
using namespace geonas::geo;

namespace {

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "geonas_geo_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string file_bytes(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

bool close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

/// Forward stand-in that ignores its inputs; used to poke calibration.
class ConstModel : public ForwardModel {
public:
    MeasurementVector operator()(const FormationParams&, double) const override {
        MeasurementVector m;
        m.fill(1.0);
        return m;
    }
    std::string id() const override { return "const"; }
};

}  // namespace

TEST_CASE("the measurement vector has 13 uniquely named channels") {
    const auto& names = measurement_names();
    CHECK(names.size() == 13);
    CHECK(names.front() == "shallow_zz_re");
    CHECK(names.back() == "deep_sym_im");
    std::set<std::string> unique(names.begin(), names.end());
    CHECK(unique.size() == 13);
}

TEST_CASE("ratio measurements match their hand-computed values") {
    FieldComponents f;
    f.H_zz = {2.0, 0.0};
    f.H_zx = {1.0, 0.0};
    f.H_xz = {-1.0, 0.0};
    f.H_yy = {1.0, 0.0};
    const RatioMeasurements r = ratio_measurements(f);
    CHECK(r.geosignal.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(r.geosignal.imag() == 0.0);
    // ((2+1)/(2-1)) * ((2-(-1))/(2+(-1))) = 3 * 3
    CHECK(r.symmetrized.real() == doctest::Approx(9.0).epsilon(1e-15));

    f.H_zx = {0.0, 0.0};
    const RatioMeasurements r0 = ratio_measurements(f);
    CHECK(r0.geosignal.real() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("a collapsing ratio denominator raises the degenerate-field guard") {
    FieldComponents f;
    f.H_zz = {1.0, 0.0};
    f.H_zx = {-1.0, 0.0};  // H_zz + H_zx = 0
    f.H_xz = {0.0, 0.0};
    f.H_yy = {1.0, 0.0};
    CHECK_THROWS_AS(ratio_measurements(f), DegenerateFieldError);
}

TEST_CASE("a homogeneous formation hides the layer boundaries") {
    const DipoleSurrogate model;
    for (double rho : {1.5, 20.0, 400.0}) {
        const FormationParams near{rho, rho, rho, 0.05, 0.3};
        const FormationParams far{rho, rho, rho, 4.0, 9.0};
        for (double dip : {84.0, 90.0, 96.5}) {
            const MeasurementVector a = model(near, dip);
            const MeasurementVector b = model(far, dip);
            for (int j = 0; j < 13; ++j) CHECK(close(a[j], b[j], 1e-10));
        }
    }
}

TEST_CASE("contrasting layers actually move the measurements") {
    const DipoleSurrogate model;
    const MeasurementVector a = model({10.0, 10.0, 10.0, 0.5, 0.5}, 90.0);
    const MeasurementVector b = model({10.0, 200.0, 2.0, 0.5, 0.5}, 90.0);
    double diff = 0.0;
    for (int j = 0; j < 13; ++j) diff += std::fabs(a[j] - b[j]);
    CHECK(diff > 1e-6);
}

TEST_CASE("field components are finite across the parameter box") {
    const DipoleSurrogate model;
    for (double rho_c : {1.0, 31.6, 1000.0})
        for (double rho_u : {1.0, 1000.0})
            for (double d : {0.01, 0.5, 10.0})
                for (double dip : {83.0, 90.0, 97.0}) {
                    const FormationParams p{rho_c, rho_u, 50.0, d, 1.0};
                    for (const auto& set : model.tool().sets) {
                        const FieldComponents f = field_components(p, dip, set);
                        CHECK(std::isfinite(f.H_zz.real()));
                        CHECK(std::isfinite(f.H_zz.imag()));
                        CHECK(std::isfinite(f.H_zx.real()));
                        CHECK(std::isfinite(f.H_xz.imag()));
                        CHECK(std::isfinite(f.H_yy.real()));
                    }
                }
}

TEST_CASE("formation draws are log-uniform inside the declared box") {
    Rng rng(2024);
    FormationParams p;
    double dip;
    std::vector<double> rhos;
    for (int i = 0; i < 20000; ++i) {
        sample_formation(rng, p, dip);
        REQUIRE(p.rho_c >= kRhoMin);
        REQUIRE(p.rho_c <= kRhoMax);
        REQUIRE(p.rho_u >= kRhoMin);
        REQUIRE(p.rho_l <= kRhoMax);
        REQUIRE(p.d_u >= kDistMin);
        REQUIRE(p.d_u <= kDistMax);
        REQUIRE(p.d_l <= kDistMax);
        REQUIRE(dip >= kDipMin);
        REQUIRE(dip <= kDipMax);
        rhos.push_back(p.rho_c);
    }
    std::nth_element(rhos.begin(), rhos.begin() + rhos.size() / 2, rhos.end());
    const double median = rhos[rhos.size() / 2];
    CHECK(median > 20.0);   // log-uniform median is sqrt(1 * 1000) ~= 31.6
    CHECK(median < 50.0);

    Rng a(9), b(9);
    FormationParams pa, pb;
    double da, db;
    sample_formation(a, pa, da);
    sample_formation(b, pb, db);
    CHECK(pa.rho_c == pb.rho_c);
    CHECK(pa.d_l == pb.d_l);
    CHECK(da == db);
}

TEST_CASE("formation scaling hits its anchor points exactly") {
    ScalingTable t;
    const auto s = t.scale_formation({1.0, 1e3, std::pow(10.0, 1.5), 1e-2, 10.0});
    CHECK(std::fabs(s[0] - 0.5) <= 1e-12);
    CHECK(std::fabs(s[1] - 1.5) <= 1e-12);
    CHECK(std::fabs(s[2] - 1.0) <= 1e-12);
    CHECK(std::fabs(s[3] - 0.5) <= 1e-12);
    CHECK(std::fabs(s[4] - 1.5) <= 1e-12);

    CHECK(t.scale_dip(83.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t.scale_dip(97.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(t.scale_dip(90.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("formation scaling round-trips random draws") {
    ScalingTable t;
    Rng rng(15);
    FormationParams p;
    double dip;
    for (int i = 0; i < 500; ++i) {
        sample_formation(rng, p, dip);
        const FormationParams q = t.unscale_formation(t.scale_formation(p));
        CHECK(close(q.rho_c, p.rho_c, 1e-12));
        CHECK(close(q.rho_u, p.rho_u, 1e-12));
        CHECK(close(q.rho_l, p.rho_l, 1e-12));
        CHECK(close(q.d_u, p.d_u, 1e-12));
        CHECK(close(q.d_l, p.d_l, 1e-12));
        CHECK(close(t.unscale_dip(t.scale_dip(dip)), dip, 1e-12));
    }
}

TEST_CASE("raw values outside their physical box are refused by name") {
    ScalingTable t;
    try {
        t.scale_formation({0.5, 10.0, 10.0, 1.0, 1.0});
        FAIL("expected a range error");
    } catch (const RangeError& e) {
        CHECK(e.variable == "rho_c");
    }
    try {
        t.scale_formation({10.0, 10.0, 10.0, 20.0, 1.0});
        FAIL("expected a range error");
    } catch (const RangeError& e) {
        CHECK(e.variable == "d_u");
    }
    try {
        t.scale_dip(80.0);
        FAIL("expected a range error");
    } catch (const RangeError& e) {
        CHECK(e.variable == "dip");
    }
    CHECK_THROWS_AS(t.unscale_dip(1.6), RangeError);
    CHECK_THROWS_AS(t.unscale_formation({0.4, 1.0, 1.0, 1.0, 1.0}), RangeError);
}

TEST_CASE("clamped unscaling pins out-of-range outputs to the box edge") {
    ScalingTable t;
    bool clamped = true;
    const FormationParams ok = t.unscale_formation_clamped({1.0, 1.0, 1.0, 1.0, 1.0}, clamped);
    CHECK_FALSE(clamped);
    CHECK(ok.rho_c == doctest::Approx(std::pow(10.0, 1.5)));

    const FormationParams hi = t.unscale_formation_clamped({2.0, 1.0, 1.0, 1.0, 0.2}, clamped);
    CHECK(clamped);
    CHECK(hi.rho_c == doctest::Approx(kRhoMax));
    CHECK(hi.d_l == doctest::Approx(kDistMin));
}

TEST_CASE("measurement scaling is affine between the calibrated bounds") {
    ScalingTable t;
    t.m_lo.fill(0.0);
    t.m_hi.fill(2.0);
    CHECK(t.scale_measurement(2, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.scale_measurement(2, 0.0) == 0.5);
    CHECK(t.scale_measurement(2, 2.0) == 1.5);
    CHECK(t.unscale_measurement(2, t.scale_measurement(2, 1.37)) ==
          doctest::Approx(1.37).epsilon(1e-15));
    try {
        t.scale_measurement(2, 2.5);
        FAIL("expected a range error");
    } catch (const RangeError& e) {
        CHECK(e.variable == "m3");
    }
}

TEST_CASE("calibration is deterministic and padding widens the box") {
    const DipoleSurrogate model;
    const ScalingTable a = ScalingTable::calibrate(model, 400, 0.05);
    const ScalingTable b = ScalingTable::calibrate(model, 400, 0.05);
    CHECK(a.m_lo == b.m_lo);
    CHECK(a.m_hi == b.m_hi);
    for (int j = 0; j < 13; ++j) CHECK(a.m_lo[j] < a.m_hi[j]);

    const ScalingTable wide = ScalingTable::calibrate(model, 400, 0.25);
    for (int j = 0; j < 13; ++j) {
        CHECK(wide.m_lo[j] < a.m_lo[j]);
        CHECK(wide.m_hi[j] > a.m_hi[j]);
    }

    CHECK_THROWS_AS(ScalingTable::calibrate(model, 1, 0.05), ConfigError);
    CHECK_THROWS_AS(ScalingTable::calibrate(ConstModel{}, 100, 0.05), ConfigError);
}

TEST_CASE("generated records are scaled, reproducible, and order-independent") {
    const DipoleSurrogate model;
    const ScalingTable table = ScalingTable::calibrate(model, 2000, 0.05);

    const Dataset ds = generate_dataset(30, 77, model, table);
    REQUIRE(ds.records.size() == 30);
    CHECK(ds.seed == 77);
    CHECK(ds.model_id == model.id());
    for (const auto& r : ds.records) {
        for (double v : r.p) {
            CHECK(v >= 0.5);
            CHECK(v <= 1.5);
        }
        CHECK(r.t >= 0.5);
        CHECK(r.t <= 1.5);
        for (double v : r.m) {
            CHECK(v >= 0.5);
            CHECK(v <= 1.5);
        }
    }

    const Dataset again = generate_dataset(30, 77, model, table);
    for (size_t i = 0; i < 30; ++i) {
        CHECK(again.records[i].p == ds.records[i].p);
        CHECK(again.records[i].m == ds.records[i].m);
    }

    // Record i depends only on (seed, i), not on how many records are asked for.
    const Dataset prefix = generate_dataset(8, 77, model, table);
    CHECK(prefix.records[7].p == ds.records[7].p);
    CHECK(prefix.records[7].m == ds.records[7].m);

    const Dataset other = generate_dataset(8, 78, model, table);
    CHECK(other.records[0].p != ds.records[0].p);
}

TEST_CASE("dataset files round-trip exactly and rewrite byte-identically") {
    const auto dir = temp_dir();
    const DipoleSurrogate model;
    const ScalingTable table = ScalingTable::calibrate(model, 500, 0.05);
    const Dataset ds = generate_dataset(12, 3, model, table);

    const auto path = dir / "roundtrip.ds";
    write_dataset(path, ds);
    const Dataset back = read_dataset(path);
    CHECK(back.seed == ds.seed);
    CHECK(back.model_id == ds.model_id);
    CHECK(back.scaling.m_lo == ds.scaling.m_lo);
    CHECK(back.scaling.m_hi == ds.scaling.m_hi);
    REQUIRE(back.records.size() == ds.records.size());
    for (size_t i = 0; i < ds.records.size(); ++i) {
        CHECK(back.records[i].p == ds.records[i].p);
        CHECK(back.records[i].t == ds.records[i].t);
        CHECK(back.records[i].m == ds.records[i].m);
    }

    const auto copy = dir / "rewrite.ds";
    write_dataset(copy, back);
    CHECK(file_bytes(copy) == file_bytes(path));

    CHECK_THROWS_AS(read_dataset(dir / "missing.ds"), IoError);
    const auto junk = dir / "junk.ds";
    std::ofstream(junk) << "not a dataset\n";
    CHECK_THROWS_AS(read_dataset(junk), IoError);
}

TEST_CASE("the 80/20 split peels off every fifth record") {
    const DipoleSurrogate model;
    const ScalingTable table = ScalingTable::calibrate(model, 500, 0.05);
    const Dataset ds = generate_dataset(10, 21, model, table);
    const auto [train, val] = split_80_20(ds);
    CHECK(train.records.size() == 8);
    CHECK(val.records.size() == 2);
    CHECK(val.records[0].p == ds.records[4].p);
    CHECK(val.records[1].p == ds.records[9].p);
    CHECK(train.records[4].p == ds.records[5].p);
    CHECK(train.scaling.m_lo == ds.scaling.m_lo);
}

TEST_CASE("training views expose the right input and target layouts") {
    const DipoleSurrogate model;
    const ScalingTable table = ScalingTable::calibrate(model, 500, 0.05);
    const Dataset ds = generate_dataset(5, 13, model, table);

    const nn::Dataset fwd = forward_samples(ds);
    REQUIRE(fwd.size() == 5);
    CHECK(fwd[0].input.size() == 6);
    CHECK(fwd[0].target.size() == 13);
    CHECK(fwd[0].input[0] == ds.records[0].p[0]);
    CHECK(fwd[0].input[5] == ds.records[0].t);
    CHECK(fwd[0].target[12] == ds.records[0].m[12]);

    const nn::Dataset inv = inverse_samples(ds);
    REQUIRE(inv.size() == 5);
    CHECK(inv[0].input.size() == 14);
    CHECK(inv[0].target.size() == 13);
    CHECK(inv[0].input[0] == ds.records[0].m[0]);
    CHECK(inv[0].input[12] == ds.records[0].m[12]);
    CHECK(inv[0].input[13] == ds.records[0].t);
    // The composed training target is the measurement vector itself.
    CHECK(inv[0].target == std::vector<double>(ds.records[0].m.begin(), ds.records[0].m.end()));
}
