#include "ccsc/records.hpp"

#include "ccsc/error.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace ccsc {

using ordered_json = nlohmann::ordered_json;

Method Evaluation::method() const {
    if (mc) return {Method::Kind::monte_carlo, 0, mc->samples, mc->seed};
    return {Method::Kind::quadrature, rule.order, 0, 0};
}

namespace {

MIEstimate mi(const Constellation& c, double snr, double variance, const Evaluation& how) {
    if (how.mc) return cc_mutual_information_mc(c, snr, variance, *how.mc);
    return cc_mutual_information(c, snr, variance, how.rule);
}

void check_stream(const std::ostream& out) {
    if (!out) throw Error(Errc::io, "write failed");
}

ordered_json meta_json(const RunMeta& meta) {
    ordered_json m;
    m["tool"] = tool_name;
    m["version"] = tool_version;
    m["command"] = meta.command;
    m["constellations"] = meta.constellations;
    if (meta.method.kind == Method::Kind::monte_carlo) {
        m["method"] = "monte-carlo";
        m["mc_samples"] = meta.method.samples;
        m["seed"] = meta.method.seed;
        m["max_std_error"] = meta.max_std_error;
    } else {
        m["method"] = "gauss-hermite";
        m["gh_order"] = meta.method.order;
    }
    if (!meta.snr_db.empty()) m["snr_db"] = meta.snr_db;
    if (!meta.sigma_sq.empty()) m["sigma_sq"] = meta.sigma_sq;
    if (meta.search) {
        m["scan_lo_db"] = meta.search->scan_lo_db;
        m["scan_hi_db"] = meta.search->scan_hi_db;
        m["scan_step_db"] = meta.search->scan_step_db;
        m["tol_db"] = meta.search->tol_db;
    }
    return m;
}

void write_document(const RunMeta& meta, ordered_json rows, std::ostream& out) {
    ordered_json doc;
    doc["meta"] = meta_json(meta);
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
    check_stream(out);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    if (!line.empty() && line.back() == sep) parts.emplace_back();
    return parts;
}

} // namespace

CurveRecord evaluate_curve_point(const Constellation& c, double snr_db, double sigma_sq, const Evaluation& how) {
    const WiretapChannel ch(db_to_linear(snr_db), sigma_sq);
    CurveRecord r;
    r.constellation = c.name();
    r.snr_db = snr_db;
    r.sigma_sq = sigma_sq;
    const MIEstimate main = mi(c, ch.snr(), 1.0, how);
    const MIEstimate eve = mi(c, ch.snr(), ch.sigma_sq(), how);
    r.mi_main = main.bits;
    r.mi_eve = eve.bits;
    r.mi_main_error = main.error_bound;
    r.mi_eve_error = eve.error_bound;
    r.cc_sc = std::max(0.0, main.bits - eve.bits);
    r.gc_sc = gaussian_secrecy_capacity(ch);
    r.gaussian_cap = gaussian_channel_capacity(ch.snr());
    return r;
}

MIRecord evaluate_mi_point(const Constellation& c, double snr_db, double variance, const Evaluation& how) {
    const MIEstimate e = mi(c, db_to_linear(snr_db), variance, how);
    return {c.name(), snr_db, variance, e.bits, e.error_bound};
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void emit_csv(std::span<const CurveRecord> records, std::ostream& out) {
    out << curve_csv_header << '\n';
    for (const auto& r : records) {
        out << r.constellation << ',' << format_number(r.snr_db) << ',' << format_number(r.sigma_sq) << ','
            << format_number(r.mi_main) << ',' << format_number(r.mi_eve) << ',' << format_number(r.cc_sc) << ','
            << format_number(r.gc_sc) << ',' << format_number(r.gaussian_cap) << '\n';
    }
    check_stream(out);
}

void emit_csv(std::span<const MIRecord> records, std::ostream& out) {
    out << "constellation,snr_db,variance,mi,error_bound\n";
    for (const auto& r : records) {
        out << r.constellation << ',' << format_number(r.snr_db) << ',' << format_number(r.variance) << ','
            << format_number(r.bits) << ',' << format_number(r.error_bound) << '\n';
    }
    check_stream(out);
}

void emit_csv(std::span<const MaximumRow> rows, std::ostream& out) {
    out << "constellation,sigma_sq,snr_max_db,snr_max_linear,c_max,bracket_lo_db,bracket_hi_db,"
           "grid_local_maxima,iterations,unimodal_ok,error_bound\n";
    for (const auto& row : rows) {
        const MaximumResult& m = row.result;
        out << row.constellation << ',' << format_number(m.sigma_sq) << ',' << format_number(m.snr_max_db) << ','
            << format_number(m.snr_max_linear) << ',' << format_number(m.c_max) << ','
            << format_number(m.bracket_lo_db) << ',' << format_number(m.bracket_hi_db) << ','
            << m.grid_local_maxima << ',' << m.iterations << ',' << (m.unimodal_ok ? "true" : "false") << ','
            << format_number(m.error_bound) << '\n';
    }
    check_stream(out);
}

void emit_json(std::span<const CurveRecord> records, const RunMeta& meta, std::ostream& out) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : records) {
        ordered_json j;
        j["constellation"] = r.constellation;
        j["snr_db"] = r.snr_db;
        j["sigma_sq"] = r.sigma_sq;
        j["mi_main"] = r.mi_main;
        j["mi_eve"] = r.mi_eve;
        j["cc_sc"] = r.cc_sc;
        j["gc_sc"] = r.gc_sc;
        j["gaussian_cap"] = r.gaussian_cap;
        if (meta.method.kind == Method::Kind::monte_carlo) {
            j["mi_main_stderr"] = r.mi_main_error;
            j["mi_eve_stderr"] = r.mi_eve_error;
        }
        rows.push_back(std::move(j));
    }
    write_document(meta, std::move(rows), out);
}

void emit_json(std::span<const MIRecord> records, const RunMeta& meta, std::ostream& out) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : records) {
        ordered_json j;
        j["constellation"] = r.constellation;
        j["snr_db"] = r.snr_db;
        j["variance"] = r.variance;
        j["mi"] = r.bits;
        j["error_bound"] = r.error_bound;
        rows.push_back(std::move(j));
    }
    write_document(meta, std::move(rows), out);
}

void emit_json(std::span<const MaximumRow> rows_in, const RunMeta& meta, std::ostream& out) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : rows_in) {
        const MaximumResult& m = row.result;
        ordered_json j;
        j["constellation"] = row.constellation;
        j["sigma_sq"] = m.sigma_sq;
        j["snr_max_db"] = m.snr_max_db;
        j["snr_max_linear"] = m.snr_max_linear;
        j["c_max"] = m.c_max;
        j["bracket"] = {m.bracket_lo_db, m.bracket_hi_db};
        j["grid_local_maxima"] = m.grid_local_maxima;
        j["iterations"] = m.iterations;
        j["unimodal_ok"] = m.unimodal_ok;
        j["error_bound"] = m.error_bound;
        rows.push_back(std::move(j));
    }
    write_document(meta, std::move(rows), out);
}

std::vector<CurveRecord> parse_curve_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != curve_csv_header)
        throw Error(Errc::parse, "missing or unexpected CSV header");
    std::vector<CurveRecord> out;
    for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
        const auto f = split(line, ',');
        if (f.size() != 8) throw Error(Errc::parse, "line " + std::to_string(lineno) + ": expected 8 fields");
        CurveRecord r;
        r.constellation = f[0];
        try {
            r.snr_db = std::stod(f[1]);
            r.sigma_sq = std::stod(f[2]);
            r.mi_main = std::stod(f[3]);
            r.mi_eve = std::stod(f[4]);
            r.cc_sc = std::stod(f[5]);
            r.gc_sc = std::stod(f[6]);
            r.gaussian_cap = std::stod(f[7]);
        } catch (const std::exception&) {
            throw Error(Errc::parse, "line " + std::to_string(lineno) + ": bad number");
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace ccsc
