#pragma once

// (k, omega) parameter-plane scans for periodic orbits of the kicked map.
//
// Every grid cell is sampled at its centre. For each target class (p, q) the
// cell is marked found when Newton converges from some seed for some lift
// w_J = q + n p of the winding; Newton failure counts as absence, so cells
// near tongue boundaries can be under-reported. The scan records existence
// and stability only; it says nothing about whether the orbits are simple.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shear/kicked_map.hpp"

namespace shear {

struct TargetClass {
    int p = 1;
    std::int64_t q = 0;
    friend auto operator<=>(const TargetClass&, const TargetClass&) = default;
};

inline constexpr int kMaxSweepPeriod = 16;

struct SweepConfig {
    double k_min = 0.0;
    double k_max = 1.0;
    double omega_min = 0.0;
    double omega_max = kTwoPi;
    int nk = 200;
    int nomega = 200;
    int max_period = 5;
    int grid_n = 4;     // seeds per axis per (cell, target, lift)
    double tol = 1e-10;
    std::vector<TargetClass> periods;  // empty: every reduced q/p with p <= max_period

    /// Throws std::domain_error on the first violated guard.
    void validate() const;

    /// Explicit periods if given, otherwise all reduced q/p, p <= max_period.
    std::vector<TargetClass> targets() const;

    double k_at(int i) const noexcept { return k_min + (i + 0.5) * (k_max - k_min) / nk; }
    double omega_at(int j) const noexcept { return omega_min + (j + 0.5) * (omega_max - omega_min) / nomega; }
};

/// Decimal real or ratio, optionally scaled by pi: "0.5", "1/3", "pi",
/// "0.5pi", "2/3pi", "2pi/15".
/// Throws std::invalid_argument.
double parse_real(std::string_view text);

/// "p:q" or "q/p".
TargetClass parse_target(std::string_view text);

/// Flat key=value text; '#' starts a comment. Keys: k_min k_max omega_min
/// omega_max nk nomega max_period grid_n tol periods (comma list of p:q).
/// Unknown keys and malformed values throw std::invalid_argument.
SweepConfig parse_sweep_config(std::string_view text);
SweepConfig load_sweep_config(const std::filesystem::path& path);

struct TongueRecord {
    double k = 0.0;
    double omega = 0.0;
    int p = 1;
    std::int64_t w_J = 0;  // the class q; alpha is computed with the lift actually found
    bool found = false;
    std::optional<Stability> stability;
    std::optional<double> alpha;
    std::optional<double> residual;
};

/// Searches one cell for one class. Lifts violating the mean-kick bound are
/// skipped; within a lift the search stops at the first elliptic orbit,
/// otherwise the first orbit found is reported.
TongueRecord probe_cell(const MapParams& params, const TargetClass& target, int grid_n, double tol);

/// One record per (cell, target), sorted by (k, omega, p, w_J). workers = 0
/// uses the machine's hardware concurrency. The output does not depend on
/// the number of workers.
std::vector<TongueRecord> run_sweep(const SweepConfig& config, unsigned workers = 0);

struct TipLocation {
    int p = 1;
    std::int64_t q = 0;
    double omega = 0.0;
    double k = 0.0;
};

/// For each class with a found cell: the found cell of least k, ties broken
/// by least |alpha| and then least omega. Sorted by (p, q).
std::vector<TipLocation> tip_locations(const std::vector<TongueRecord>& records);

/// Header k,omega,p,w_J,found,stability,alpha,residual; reals as %.17g;
/// absent fields empty; rows sorted by (k, omega, p, w_J).
std::string format_csv(std::vector<TongueRecord> records);
void emit_csv(const std::vector<TongueRecord>& records, const std::filesystem::path& path);

/// Static SVG 1.1 heat map: omega across, k up, one cell per (k, omega) with
/// any found class, coloured by the least found period.
std::string format_svg(const std::vector<TongueRecord>& records);
void emit_svg(const std::vector<TongueRecord>& records, const std::filesystem::path& path);

}  // namespace shear
