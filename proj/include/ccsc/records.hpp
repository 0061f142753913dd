#ifndef CCSC_RECORDS_HPP
#define CCSC_RECORDS_HPP

#include "ccsc/capacity.hpp"
#include "ccsc/optimize.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ccsc {

inline constexpr const char* tool_name = "ccsc";
inline constexpr const char* tool_version = "1.0.0";

/// One plotted point: both mutual informations, the constellation-constrained
/// secrecy rate and the Gaussian-input references at (snr_db, sigma_sq).
struct CurveRecord {
    std::string constellation;
    double snr_db = 0.0;
    double sigma_sq = 1.0;
    double mi_main = 0.0;
    double mi_eve = 0.0;
    double cc_sc = 0.0;
    double gc_sc = 0.0;
    double gaussian_cap = 0.0;
    // Standard errors (Monte-Carlo) or clamp magnitudes; JSON only.
    double mi_main_error = 0.0;
    double mi_eve_error = 0.0;
};

struct MIRecord {
    std::string constellation;
    double snr_db = 0.0;
    double variance = 1.0;
    double bits = 0.0;
    double error_bound = 0.0;
};

struct MaximumRow {
    std::string constellation;
    MaximumResult result;
};

/// How expectations are evaluated: quadrature by default, Monte-Carlo when
/// mc is set.
struct Evaluation {
    HermiteRule rule = gauss_hermite(default_hermite_order);
    std::optional<MCConfig> mc;

    Method method() const;
};

CurveRecord evaluate_curve_point(const Constellation& c, double snr_db, double sigma_sq, const Evaluation& how);
MIRecord evaluate_mi_point(const Constellation& c, double snr_db, double variance, const Evaluation& how);

/// Provenance block written into every JSON document.
struct RunMeta {
    std::string command;
    std::vector<std::string> constellations;
    Method method;
    std::string snr_db;
    std::vector<double> sigma_sq;
    std::optional<SearchOptions> search;
    double max_std_error = 0.0;
};

inline constexpr const char* curve_csv_header = "constellation,snr_db,sigma_sq,mi_main,mi_eve,cc_sc,gc_sc,gaussian_cap";

/// %.9g rendering used by every CSV writer.
std::string format_number(double v);

void emit_csv(std::span<const CurveRecord> records, std::ostream& out);
void emit_csv(std::span<const MIRecord> records, std::ostream& out);
void emit_csv(std::span<const MaximumRow> rows, std::ostream& out);

void emit_json(std::span<const CurveRecord> records, const RunMeta& meta, std::ostream& out);
void emit_json(std::span<const MIRecord> records, const RunMeta& meta, std::ostream& out);
void emit_json(std::span<const MaximumRow> rows, const RunMeta& meta, std::ostream& out);

/// Reads back a document written by emit_csv(CurveRecord). Throws Errc::parse.
std::vector<CurveRecord> parse_curve_csv(std::istream& in);

} // namespace ccsc

#endif
