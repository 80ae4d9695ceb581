#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "geonas/rng.hpp"
#include "geonas/train.hpp"

namespace geonas::geo {

/// Three-layer 1D formation: resistivities (ohm-m) of the central, upper and
/// lower layers, and the distances (m) from the tool to each boundary.
struct FormationParams {
    double rho_c, rho_u, rho_l, d_u, d_l;
};

inline constexpr double kRhoMin = 1.0, kRhoMax = 1e3;       // ohm-m
inline constexpr double kDistMin = 1e-2, kDistMax = 10.0;   // m
inline constexpr double kDipMin = 83.0, kDipMax = 97.0;     // degrees

/// One transmitter-receiver set: center-to-center spacing and frequency.
struct ToolSet {
    std::string name;
    double spacing_m;
    double freq_hz;
};

/// The instrument suite: four sets, plus the short receiver-pair spacing of
/// the conventional instrument.
struct ToolConfig {
    std::string version = "lwd-v1";
    double rx_pair_m = 0.2032;
    std::array<ToolSet, 4> sets{{
        {"shallow", 0.8128, 2.0e6},   // zz, yy, geosignal, symmetrized
        {"medium", 2.4384, 0.25e6},   // symmetrized
        {"deep_zz", 12.0, 24.0e3},    // zz
        {"deep_sym", 25.0, 2.0e3},    // symmetrized
    }};
};

/// Tool-frame magnetic coupling components for one set.
struct FieldComponents {
    std::complex<double> H_zz, H_zx, H_xz, H_yy;
};

using MeasurementVector = std::array<double, 13>;

/// Names of the 13 entries, fixed order:
/// set 1 (shallow): zz re/im, yy re/im, geosignal re, symmetrized re/im;
/// set 2 (medium): symmetrized re/im; set 3 (deep): zz re/im;
/// set 4 (deep): symmetrized re/im.
const std::array<std::string, 13>& measurement_names();

/// Draw one formation + dip: resistivities and distances uniform in log10
/// over their ranges, dip uniform in degrees. Draw order: rho_c, rho_u,
/// rho_l, d_u, d_l, dip.
void sample_formation(Rng& rng, FormationParams& p, double& dip_deg);

/// geosignal = (Hzz-Hzx)/(Hzz+Hzx);
/// symmetrized = ((Hzz+Hzx)/(Hzz-Hzx)) * ((Hzz-Hxz)/(Hzz+Hxz)).
/// Any denominator with magnitude < 1e-12 raises a degenerate-field error.
struct RatioMeasurements {
    std::complex<double> geosignal;
    std::complex<double> symmetrized;
};
RatioMeasurements ratio_measurements(const FieldComponents& f);

/// Whole-space magnetic-dipole couplings for one set, with first-bounce
/// image dipoles across the two layer boundaries. The effective wavenumber
/// blends the three conductivities with weights decaying in d_u, d_l.
FieldComponents field_components(const FormationParams& p, double dip_deg, const ToolSet& set);

/// Forward physics interface: formation + dip -> 13 measurements.
class ForwardModel {
public:
    virtual ~ForwardModel() = default;
    virtual MeasurementVector operator()(const FormationParams& p, double dip_deg) const = 0;
    virtual std::string id() const = 0;
};

/// The built-in smooth stand-in for a layered-medium solver.
class DipoleSurrogate : public ForwardModel {
public:
    explicit DipoleSurrogate(ToolConfig tool = ToolConfig{}) : tool_(std::move(tool)) {}
    MeasurementVector operator()(const FormationParams& p, double dip_deg) const override;
    std::string id() const override { return "dipole-surrogate-v1/" + tool_.version; }
    const ToolConfig& tool() const { return tool_; }

private:
    ToolConfig tool_;
};

/// Affine maps onto [0.5, 1.5]: resistivities and distances in log10 scale
/// with fixed analytic bounds, dip linear in degrees, measurements linear
/// between empirical calibration bounds.
struct ScalingTable {
    std::array<double, 13> m_lo{};
    std::array<double, 13> m_hi{};

    /// Empirical measurement bounds from `count` seeded calibration draws,
    /// widened by `padding` times the span on each side. The calibration
    /// stream is fixed, independent of dataset seeds.
    static ScalingTable calibrate(const ForwardModel& model, int count = 100000,
                                  double padding = 0.05);

    std::array<double, 5> scale_formation(const FormationParams& p) const;
    FormationParams unscale_formation(const std::array<double, 5>& s) const;
    /// Clamping variant for net outputs: out-of-range values clamp to the
    /// physical bounds and set `clamped`.
    FormationParams unscale_formation_clamped(const std::array<double, 5>& s,
                                              bool& clamped) const;
    double scale_dip(double t_deg) const;
    double unscale_dip(double s) const;
    double scale_measurement(int j, double x) const;
    double unscale_measurement(int j, double s) const;
};

struct DatasetRecord {
    std::array<double, 5> p;   // scaled formation parameters
    double t;                  // scaled dip
    std::array<double, 13> m;  // scaled measurements
};

struct Dataset {
    uint64_t seed = 0;
    std::string model_id;
    ScalingTable scaling;
    std::vector<DatasetRecord> records;
};

/// Generate `count` records, each from its own derived per-record seed.
Dataset generate_dataset(int count, uint64_t seed, const ForwardModel& model,
                         const ScalingTable& table);

/// Text format: '#'-prefixed JSON metadata header, then one fixed-width
/// record line per sample (5 params, dip, 13 measurements).
void write_dataset(const std::filesystem::path& path, const Dataset& ds);
Dataset read_dataset(const std::filesystem::path& path);

/// Index-interleaved disjoint partition: every fifth record (i % 5 == 4)
/// goes to the second piece (~20%).
std::pair<Dataset, Dataset> split_80_20(const Dataset& ds);

/// Training views of a dataset.
nn::Dataset forward_samples(const Dataset& ds);  // [p,t] -> m
nn::Dataset inverse_samples(const Dataset& ds);  // [m,t] -> m, re-simulation target

}  // namespace geonas::geo
