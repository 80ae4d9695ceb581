#include "geonas/geo.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "geonas/errors.hpp"
#include "geonas/hash.hpp"
#include "geonas/textio.hpp"

namespace geonas::geo {

using cd = std::complex<double>;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kMu0 = 4.0e-7 * kPi;          // vacuum permeability
constexpr double kImageAttenuation = 0.1;      // first-bounce strength cap
constexpr double kDenominatorGuard = 1e-12;
constexpr uint64_t kCalibrationSeed = 0x67656f6e61732331ULL;  // fixed internal stream

struct Vec3 {
    double x, y, z;
};
struct CVec3 {
    cd x, y, z;
};

Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
cd dot(Vec3 a, const CVec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

/// Whole-space magnetic-dipole field at displacement rvec from a unit dipole
/// with moment direction m, for complex wavenumber k:
/// H = e^{ikr}/(4 pi r^3) [ (1-ikr)(3 rh(rh.m) - m) + (kr)^2 (m - rh(rh.m)) ].
CVec3 dipole_field(Vec3 rvec, Vec3 m, cd k) {
    const double r = std::sqrt(dot(rvec, rvec));
    const Vec3 rh{rvec.x / r, rvec.y / r, rvec.z / r};
    const cd ikr = cd(0.0, 1.0) * k * r;
    const cd kr2 = (k * r) * (k * r);
    const cd e = std::exp(ikr) / (4.0 * kPi * r * r * r);
    const double rm = dot(rh, m);
    const cd near_c = (1.0 - ikr);
    CVec3 h;
    h.x = e * (near_c * (3.0 * rh.x * rm - m.x) + kr2 * (m.x - rh.x * rm));
    h.y = e * (near_c * (3.0 * rh.y * rm - m.y) + kr2 * (m.y - rh.y * rm));
    h.z = e * (near_c * (3.0 * rh.z * rm - m.z) + kr2 * (m.z - rh.z * rm));
    return h;
}

/// Mirror of a magnetic-dipole moment across a horizontal plane: tangential
/// components flip, the vertical one is kept.
Vec3 mirror_moment(Vec3 m) { return {-m.x, -m.y, m.z}; }

cd guarded_div(cd num, cd den) {
    if (std::abs(den) < kDenominatorGuard)
        throw DegenerateFieldError("ratio denominator magnitude below guard");
    return num / den;
}

}  // namespace

const std::array<std::string, 13>& measurement_names() {
    static const std::array<std::string, 13> names = {
        "shallow_zz_re",  "shallow_zz_im",  "shallow_yy_re", "shallow_yy_im",
        "shallow_geo_re", "shallow_sym_re", "shallow_sym_im",
        "medium_sym_re",  "medium_sym_im",
        "deep_zz_re",     "deep_zz_im",
        "deep_sym_re",    "deep_sym_im",
    };
    return names;
}

void sample_formation(Rng& rng, FormationParams& p, double& dip_deg) {
    p.rho_c = std::pow(10.0, rng.uniform(0.0, 3.0));
    p.rho_u = std::pow(10.0, rng.uniform(0.0, 3.0));
    p.rho_l = std::pow(10.0, rng.uniform(0.0, 3.0));
    p.d_u = std::pow(10.0, rng.uniform(-2.0, 1.0));
    p.d_l = std::pow(10.0, rng.uniform(-2.0, 1.0));
    dip_deg = rng.uniform(kDipMin, kDipMax);
}

RatioMeasurements ratio_measurements(const FieldComponents& f) {
    RatioMeasurements r;
    r.geosignal = guarded_div(f.H_zz - f.H_zx, f.H_zz + f.H_zx);
    r.symmetrized = guarded_div(f.H_zz + f.H_zx, f.H_zz - f.H_zx) *
                    guarded_div(f.H_zz - f.H_xz, f.H_zz + f.H_xz);
    return r;
}

FieldComponents field_components(const FormationParams& p, double dip_deg, const ToolSet& set) {
    const double sigma_c = 1.0 / p.rho_c;
    const double sigma_u = 1.0 / p.rho_u;
    const double sigma_l = 1.0 / p.rho_l;
    const double L = set.spacing_m;

    // Effective medium for the wavenumber: boundary influence decays with
    // distance relative to the set's spacing.
    const double w_u = std::exp(-2.0 * p.d_u / L);
    const double w_l = std::exp(-2.0 * p.d_l / L);
    const double sigma_eff = (sigma_c + w_u * sigma_u + w_l * sigma_l) / (1.0 + w_u + w_l);

    const double omega = 2.0 * kPi * set.freq_hz;
    const double beta = std::sqrt(omega * kMu0 * sigma_eff / 2.0);
    const cd k(beta, beta);  // k^2 = i*omega*mu*sigma_eff

    const double t = dip_deg * kPi / 180.0;
    const Vec3 axis{std::sin(t), 0.0, std::cos(t)};        // tool z
    const Vec3 xdir{std::cos(t), 0.0, -std::sin(t)};       // tool x
    const Vec3 ydir{0.0, 1.0, 0.0};                        // tool y

    const Vec3 rx{L * axis.x, L * axis.y, L * axis.z};
    const Vec3 img_u{0.0, 0.0, 2.0 * p.d_u};   // transmitter image above
    const Vec3 img_l{0.0, 0.0, -2.0 * p.d_l};  // transmitter image below

    // First-bounce reflection strengths; zero in a homogeneous medium. The
    // fixed attenuation keeps every cross-coupling ratio |H_zx/H_zz| well
    // below 1, so the ratio measurements stay bounded away from their poles
    // (the transverse dipole term grows ~ (kr)^2 and would otherwise rival
    // the coaxial coupling in conductive corners of the domain).
    const double R_u = kImageAttenuation * (std::sqrt(sigma_c) - std::sqrt(sigma_u)) /
                       (std::sqrt(sigma_c) + std::sqrt(sigma_u));
    const double R_l = kImageAttenuation * (std::sqrt(sigma_c) - std::sqrt(sigma_l)) /
                       (std::sqrt(sigma_c) + std::sqrt(sigma_l));

    auto total_field = [&](Vec3 tx_moment) -> CVec3 {
        const CVec3 direct = dipole_field(rx, tx_moment, k);
        const CVec3 up = dipole_field(rx - img_u, mirror_moment(tx_moment), k);
        const CVec3 dn = dipole_field(rx - img_l, mirror_moment(tx_moment), k);
        return {direct.x + R_u * up.x + R_l * dn.x, direct.y + R_u * up.y + R_l * dn.y,
                direct.z + R_u * up.z + R_l * dn.z};
    };

    const CVec3 from_z = total_field(axis);
    const CVec3 from_x = total_field(xdir);
    const CVec3 from_y = total_field(ydir);

    FieldComponents f;
    f.H_zz = dot(axis, from_z);
    f.H_zx = dot(xdir, from_z);  // transmitter along tool z, receiver along tool x
    f.H_xz = dot(axis, from_x);
    f.H_yy = dot(ydir, from_y);
    return f;
}

MeasurementVector DipoleSurrogate::operator()(const FormationParams& p, double dip_deg) const {
    const FieldComponents f0 = field_components(p, dip_deg, tool_.sets[0]);
    const FieldComponents f1 = field_components(p, dip_deg, tool_.sets[1]);
    const FieldComponents f2 = field_components(p, dip_deg, tool_.sets[2]);
    const FieldComponents f3 = field_components(p, dip_deg, tool_.sets[3]);
    const RatioMeasurements r0 = ratio_measurements(f0);
    const RatioMeasurements r1 = ratio_measurements(f1);
    const RatioMeasurements r3 = ratio_measurements(f3);

    return MeasurementVector{
        f0.H_zz.real(), f0.H_zz.imag(), f0.H_yy.real(), f0.H_yy.imag(),
        r0.geosignal.real(), r0.symmetrized.real(), r0.symmetrized.imag(),
        r1.symmetrized.real(), r1.symmetrized.imag(),
        f2.H_zz.real(), f2.H_zz.imag(),
        r3.symmetrized.real(), r3.symmetrized.imag(),
    };
}

// ---------------------------------------------------------------- scaling

namespace {

double check_range(double x, double lo, double hi, const char* var) {
    if (!(x >= lo && x <= hi))
        throw RangeError(var, std::string(var) + " = " + format_double(x) +
                                  " outside [" + format_double(lo) + ", " + format_double(hi) +
                                  "]");
    return x;
}

double scale_log10(double x, double lo_log, double hi_log) {
    return 0.5 + (std::log10(x) - lo_log) / (hi_log - lo_log);
}

double unscale_log10(double s, double lo_log, double hi_log) {
    return std::pow(10.0, lo_log + (s - 0.5) * (hi_log - lo_log));
}

}  // namespace

ScalingTable ScalingTable::calibrate(const ForwardModel& model, int count, double padding) {
    if (count < 2) throw ConfigError("calibration needs at least 2 draws");
    ScalingTable t;
    t.m_lo.fill(std::numeric_limits<double>::infinity());
    t.m_hi.fill(-std::numeric_limits<double>::infinity());
    Rng rng(kCalibrationSeed);
    FormationParams p;
    double dip;
    for (int i = 0; i < count; ++i) {
        sample_formation(rng, p, dip);
        const MeasurementVector m = model(p, dip);
        for (int j = 0; j < 13; ++j) {
            t.m_lo[j] = std::min(t.m_lo[j], m[j]);
            t.m_hi[j] = std::max(t.m_hi[j], m[j]);
        }
    }
    for (int j = 0; j < 13; ++j) {
        const double span = t.m_hi[j] - t.m_lo[j];
        if (!(span > 0.0))
            throw ConfigError("calibration found a constant measurement channel m" +
                              std::to_string(j + 1));
        t.m_lo[j] -= padding * span;
        t.m_hi[j] += padding * span;
    }
    return t;
}

std::array<double, 5> ScalingTable::scale_formation(const FormationParams& p) const {
    check_range(p.rho_c, kRhoMin, kRhoMax, "rho_c");
    check_range(p.rho_u, kRhoMin, kRhoMax, "rho_u");
    check_range(p.rho_l, kRhoMin, kRhoMax, "rho_l");
    check_range(p.d_u, kDistMin, kDistMax, "d_u");
    check_range(p.d_l, kDistMin, kDistMax, "d_l");
    return {scale_log10(p.rho_c, 0.0, 3.0), scale_log10(p.rho_u, 0.0, 3.0),
            scale_log10(p.rho_l, 0.0, 3.0), scale_log10(p.d_u, -2.0, 1.0),
            scale_log10(p.d_l, -2.0, 1.0)};
}

FormationParams ScalingTable::unscale_formation(const std::array<double, 5>& s) const {
    for (int i = 0; i < 5; ++i)
        check_range(s[i], 0.5, 1.5, "scaled formation value");
    return {unscale_log10(s[0], 0.0, 3.0), unscale_log10(s[1], 0.0, 3.0),
            unscale_log10(s[2], 0.0, 3.0), unscale_log10(s[3], -2.0, 1.0),
            unscale_log10(s[4], -2.0, 1.0)};
}

FormationParams ScalingTable::unscale_formation_clamped(const std::array<double, 5>& s,
                                                        bool& clamped) const {
    clamped = false;
    std::array<double, 5> c = s;
    for (double& v : c) {
        if (v < 0.5) {
            v = 0.5;
            clamped = true;
        } else if (v > 1.5) {
            v = 1.5;
            clamped = true;
        }
    }
    return unscale_formation(c);
}

double ScalingTable::scale_dip(double t_deg) const {
    check_range(t_deg, kDipMin, kDipMax, "dip");
    return 0.5 + (t_deg - kDipMin) / (kDipMax - kDipMin);
}

double ScalingTable::unscale_dip(double s) const {
    check_range(s, 0.5, 1.5, "scaled dip");
    return kDipMin + (s - 0.5) * (kDipMax - kDipMin);
}

double ScalingTable::scale_measurement(int j, double x) const {
    const std::string var = "m" + std::to_string(j + 1);
    if (!(x >= m_lo[j] && x <= m_hi[j]))
        throw RangeError(var, var + " = " + format_double(x) + " outside calibrated [" +
                                  format_double(m_lo[j]) + ", " + format_double(m_hi[j]) + "]");
    return 0.5 + (x - m_lo[j]) / (m_hi[j] - m_lo[j]);
}

double ScalingTable::unscale_measurement(int j, double s) const {
    return m_lo[j] + (s - 0.5) * (m_hi[j] - m_lo[j]);
}

// ---------------------------------------------------------------- dataset

Dataset generate_dataset(int count, uint64_t seed, const ForwardModel& model,
                         const ScalingTable& table) {
    if (count < 1) throw ConfigError("dataset count must be >= 1");
    Dataset ds;
    ds.seed = seed;
    ds.model_id = model.id();
    ds.scaling = table;
    ds.records.reserve(count);
    for (int i = 0; i < count; ++i) {
        // Each record owns a derived seed stream, so record i is the same
        // whatever the worker layout. A draw whose measurements overshoot
        // the calibrated bounds (or hit the degenerate-field guard) is
        // rejected and redrawn from the same stream.
        Rng rec_rng(derive_seed(seed, static_cast<uint64_t>(i)));
        for (int attempt = 0;; ++attempt) {
            FormationParams p;
            double dip;
            sample_formation(rec_rng, p, dip);
            try {
                const MeasurementVector m = model(p, dip);
                DatasetRecord rec;
                rec.p = table.scale_formation(p);
                rec.t = table.scale_dip(dip);
                for (int j = 0; j < 13; ++j) rec.m[j] = table.scale_measurement(j, m[j]);
                ds.records.push_back(rec);
                break;
            } catch (const RangeError&) {
                if (attempt >= 999) throw;
            } catch (const DegenerateFieldError&) {
                if (attempt >= 999) throw;
            }
        }
    }
    return ds;
}

namespace {
constexpr int kColWidth = 24;
}

void write_dataset(const std::filesystem::path& path, const Dataset& ds) {
    ordered_json meta;
    meta["version"] = 1;
    meta["seed"] = ds.seed;
    meta["count"] = ds.records.size();
    meta["model"] = ds.model_id;
    meta["measurement_order"] = measurement_names();
    meta["scaling"] = ordered_json{{"rho_log10", {0.0, 3.0}},
                                   {"dist_log10", {-2.0, 1.0}},
                                   {"dip_deg", {kDipMin, kDipMax}},
                                   {"m_lo", ds.scaling.m_lo},
                                   {"m_hi", ds.scaling.m_hi}};

    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open dataset for writing: " + path.string());
    f << "# geonas-dataset v1\n";
    f << "# " << meta.dump() << "\n";
    f << "# columns: rho_c rho_u rho_l d_u d_l dip m1..m13 (scaled)\n";
    for (const auto& r : ds.records) {
        for (int i = 0; i < 5; ++i) f << format_double_padded(r.p[i], kColWidth) << " ";
        f << format_double_padded(r.t, kColWidth);
        for (int j = 0; j < 13; ++j) f << " " << format_double_padded(r.m[j], kColWidth);
        f << "\n";
    }
    if (!f) throw IoError("failed writing dataset: " + path.string());
}

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open dataset: " + path.string());
    std::string line;
    if (!std::getline(f, line) || line.rfind("# geonas-dataset", 0) != 0)
        throw IoError("not a dataset file: " + path.string());
    if (!std::getline(f, line) || line.rfind("# ", 0) != 0)
        throw IoError("dataset metadata line missing: " + path.string());

    ordered_json meta;
    try {
        meta = ordered_json::parse(line.substr(2));
    } catch (const std::exception& e) {
        throw IoError("dataset metadata unparseable: " + std::string(e.what()));
    }
    Dataset ds;
    ds.seed = meta.at("seed").get<uint64_t>();
    ds.model_id = meta.at("model").get<std::string>();
    const size_t count = meta.at("count").get<size_t>();
    const auto lo = meta.at("scaling").at("m_lo").get<std::vector<double>>();
    const auto hi = meta.at("scaling").at("m_hi").get<std::vector<double>>();
    if (lo.size() != 13 || hi.size() != 13) throw IoError("dataset scaling table malformed");
    std::copy(lo.begin(), lo.end(), ds.scaling.m_lo.begin());
    std::copy(hi.begin(), hi.end(), ds.scaling.m_hi.begin());

    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        DatasetRecord r;
        std::string tok;
        for (int i = 0; i < 19; ++i) {
            if (!(ss >> tok))
                throw IoError("dataset record line has fewer than 19 values: " + line);
            const double v = parse_double(tok);
            if (i < 5)
                r.p[i] = v;
            else if (i == 5)
                r.t = v;
            else
                r.m[i - 6] = v;
        }
        if (ss >> tok) throw IoError("dataset record line has more than 19 values");
        ds.records.push_back(r);
    }
    if (ds.records.size() != count)
        throw IoError("dataset record count mismatch: header says " + std::to_string(count) +
                      ", file has " + std::to_string(ds.records.size()));
    return ds;
}

std::pair<Dataset, Dataset> split_80_20(const Dataset& ds) {
    Dataset a = ds, b = ds;
    a.records.clear();
    b.records.clear();
    for (size_t i = 0; i < ds.records.size(); ++i) {
        if (i % 5 == 4)
            b.records.push_back(ds.records[i]);
        else
            a.records.push_back(ds.records[i]);
    }
    return {std::move(a), std::move(b)};
}

nn::Dataset forward_samples(const Dataset& ds) {
    nn::Dataset out;
    out.reserve(ds.records.size());
    for (const auto& r : ds.records) {
        nn::TrainSample s;
        s.input.assign(r.p.begin(), r.p.end());
        s.input.push_back(r.t);
        s.target.assign(r.m.begin(), r.m.end());
        out.push_back(std::move(s));
    }
    return out;
}

nn::Dataset inverse_samples(const Dataset& ds) {
    nn::Dataset out;
    out.reserve(ds.records.size());
    for (const auto& r : ds.records) {
        nn::TrainSample s;
        s.input.assign(r.m.begin(), r.m.end());
        s.input.push_back(r.t);
        s.target.assign(r.m.begin(), r.m.end());
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace geonas::geo
