#include "ccsc/cli.hpp"

#include "ccsc/capacity.hpp"
#include "ccsc/error.hpp"
#include "ccsc/optimize.hpp"
#include "ccsc/parallel.hpp"
#include "ccsc/records.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace ccsc {

namespace {

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || s.empty() || !std::isfinite(v))
        throw Error(Errc::parse, "bad number '" + s + "' in " + what);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

int parse_size(const std::string& digits, const std::string& selector) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size())
        throw Error(Errc::parse, "bad constellation size in '" + selector + "'");
    return v;
}

std::vector<Constellation> parse_constellation_list(const std::string& text) {
    std::vector<Constellation> out;
    if (text.rfind("file:", 0) == 0) {
        out.push_back(parse_constellation_selector(text));
        return out;
    }
    for (const auto& part : split(text, ',')) out.push_back(parse_constellation_selector(part));
    return out;
}

// Shared option block for the evaluation subcommands.
struct CommonOptions {
    std::string constellation = "bpsk";
    int gh_order = default_hermite_order;
    std::optional<std::uint64_t> mc_samples;
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string out_path;

    void attach(CLI::App* sub, bool allow_mc) {
        sub->add_option("--constellation", constellation,
                        "bpsk | psk<M> | qam<M> | file:<path>; comma list where several are allowed")
            ->capture_default_str();
        sub->add_option("--gh-order", gh_order, "Gauss-Hermite order per axis")
            ->capture_default_str()
            ->check(CLI::Range(1, max_hermite_order));
        if (allow_mc) {
            sub->add_option("--mc-samples", mc_samples, "use Monte-Carlo with this many samples")
                ->check(CLI::Range(std::uint64_t{2}, std::numeric_limits<std::uint64_t>::max()));
            sub->add_option("--seed", seed, "Monte-Carlo seed")->capture_default_str();
        }
        sub->add_option("--format", format, "csv | json")
            ->capture_default_str()
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", out_path, "output file (default: standard output)");
    }

    Evaluation evaluation() const {
        Evaluation how;
        how.rule = gauss_hermite(gh_order);
        if (mc_samples) how.mc = MCConfig{*mc_samples, seed};
        return how;
    }

    RunMeta meta(const std::string& command, const std::vector<Constellation>& cs) const {
        RunMeta m;
        m.command = command;
        for (const auto& c : cs) m.constellations.push_back(c.name());
        m.method = evaluation_method();
        return m;
    }

    Method evaluation_method() const {
        if (mc_samples) return {Method::Kind::monte_carlo, 0, *mc_samples, seed};
        return {Method::Kind::quadrature, gh_order, 0, 0};
    }
};

struct SearchFlags {
    std::string scan_db = "-30:50:0.5";
    double tol_db = 0.01;

    void attach(CLI::App* sub) {
        sub->add_option("--scan-db", scan_db, "coarse scan lo:hi:step in dB")->capture_default_str();
        sub->add_option("--tol-db", tol_db, "golden-section tolerance in dB")->capture_default_str();
    }

    SearchOptions options(int order) const {
        const auto parts = split(scan_db, ':');
        if (parts.size() != 3) throw Error(Errc::parse, "--scan-db expects lo:hi:step");
        SearchOptions o;
        o.scan_lo_db = parse_double(parts[0], "--scan-db");
        o.scan_hi_db = parse_double(parts[1], "--scan-db");
        o.scan_step_db = parse_double(parts[2], "--scan-db");
        o.tol_db = tol_db;
        o.order = order;
        if (!(o.scan_lo_db < o.scan_hi_db) || !(o.scan_step_db > 0.0) || !(o.tol_db > 0.0))
            throw Error(Errc::parse, "--scan-db needs lo < hi, step > 0 and --tol-db > 0");
        return o;
    }
};

// Renders into a buffer first so a failing computation never leaves a
// truncated file behind.
template <class Rows>
void write_rows(const Rows& rows, const RunMeta& meta, const CommonOptions& common, std::ostream& out) {
    std::ostringstream buffer;
    if (common.format == "json")
        emit_json(std::span(rows), meta, buffer);
    else
        emit_csv(std::span(rows), buffer);

    if (common.out_path.empty()) {
        out << buffer.str();
        out.flush();
        if (!out) throw Error(Errc::io, "cannot write to standard output");
        return;
    }
    std::ofstream file(common.out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(Errc::io, "cannot open '" + common.out_path + "' for writing");
    file << buffer.str();
    file.close();
    if (!file) throw Error(Errc::io, "write to '" + common.out_path + "' failed");
}

std::vector<CurveRecord> curve_rows(const std::vector<Constellation>& cs, const std::vector<double>& snr_db,
                                    const std::vector<double>& sigma, const Evaluation& how) {
    for (double s : sigma) WiretapChannel(0.0, s); // validates sigma^2 >= 1 up front
    const std::size_t per_c = sigma.size() * snr_db.size();
    std::vector<CurveRecord> rows(cs.size() * per_c);
    parallel_for(rows.size(), [&](std::size_t k) {
        const std::size_t ci = k / per_c;
        const std::size_t si = (k % per_c) / snr_db.size();
        const std::size_t di = k % snr_db.size();
        rows[k] = evaluate_curve_point(cs[ci], snr_db[di], sigma[si], how);
    });
    return rows;
}

double max_std_error(const std::vector<CurveRecord>& rows) {
    double m = 0.0;
    for (const auto& r : rows) m = std::max({m, r.mi_main_error, r.mi_eve_error});
    return m;
}

int dispatch(CLI::App& app, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    app.description("Constellation-constrained secrecy capacity of the Gaussian wiretap channel");
    app.require_subcommand(1);

    // mi
    CommonOptions mi_opts;
    std::string mi_snr = "0";
    std::string mi_var = "1";
    auto* mi_cmd = app.add_subcommand("mi", "mutual information of one AWGN channel");
    mi_opts.attach(mi_cmd, true);
    mi_cmd->add_option("--snr-db", mi_snr, "value or start:stop:step")->capture_default_str();
    mi_cmd->add_option("--sigma2", mi_var, "noise variance(s), comma list")->capture_default_str();

    // secrecy
    CommonOptions sec_opts;
    std::string sec_snr;
    std::string sec_sigma;
    auto* sec_cmd = app.add_subcommand("secrecy", "secrecy rate at given points");
    sec_opts.attach(sec_cmd, true);
    sec_cmd->add_option("--snr-db", sec_snr, "value or start:stop:step")->required();
    sec_cmd->add_option("--sigma2", sec_sigma, "eavesdropper noise ratio(s), comma list")->required();

    // sweep
    CommonOptions sweep_opts;
    std::string sweep_snr;
    std::string sweep_sigma = "5,10,15,20";
    auto* sweep_cmd = app.add_subcommand("sweep", "secrecy curves over an SNR grid");
    sweep_opts.attach(sweep_cmd, true);
    sweep_cmd->add_option("--snr-db", sweep_snr, "start:stop:step")->required();
    sweep_cmd->add_option("--sigma2", sweep_sigma, "comma list")->capture_default_str();

    // surface
    CommonOptions surf_opts;
    surf_opts.constellation = "bpsk,qam4,psk8,qam16";
    std::string surf_snr = "-10:40:0.5";
    std::string surf_sigma = "2:20:1";
    auto* surf_cmd = app.add_subcommand("surface", "secrecy rate over the full (snr, sigma^2) grid");
    surf_opts.attach(surf_cmd, true);
    surf_cmd->add_option("--snr-db", surf_snr, "start:stop:step")->capture_default_str();
    surf_cmd->add_option("--sigma2", surf_sigma, "comma list or start:stop:step")->capture_default_str();

    // maximize
    CommonOptions max_opts;
    SearchFlags max_search;
    std::string max_sigma;
    auto* max_cmd = app.add_subcommand("maximize", "locate the SNR of peak secrecy rate");
    max_opts.attach(max_cmd, false);
    max_search.attach(max_cmd);
    max_cmd->add_option("--sigma2", max_sigma, "comma list, each > 1")->required();

    // max-sweep
    CommonOptions msw_opts;
    SearchFlags msw_search;
    std::string msw_sigma = "5,10,15,20";
    auto* msw_cmd = app.add_subcommand("max-sweep", "peak secrecy rate and its SNR versus sigma^2");
    msw_opts.attach(msw_cmd, false);
    msw_search.attach(msw_cmd);
    msw_cmd->add_option("--sigma2", msw_sigma, "ascending comma list, each > 1")->capture_default_str();

    // constellation
    std::string con_sel = "bpsk";
    std::string con_format = "csv";
    std::string con_out;
    auto* con_cmd = app.add_subcommand("constellation", "print normalized constellation points");
    con_cmd->add_option("--constellation", con_sel, "selector")->capture_default_str();
    con_cmd->add_option("--format", con_format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    con_cmd->add_option("--out", con_out, "output file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream help_out, help_err;
        const int code = app.exit(e, help_out, help_err);
        if (code == 0) {
            out << help_out.str();
            return exit_ok;
        }
        err << help_err.str() << help_out.str();
        return exit_usage;
    }

    if (mi_cmd->parsed()) {
        const auto cs = parse_constellation_list(mi_opts.constellation);
        const auto snr = parse_db_grid(mi_snr);
        const auto var = parse_number_list(mi_var);
        for (double v : var)
            if (!(v > 0.0)) throw Error(Errc::invalid_noise, "noise variance must be positive");
        const Evaluation how = mi_opts.evaluation();
        std::vector<MIRecord> rows(cs.size() * var.size() * snr.size());
        parallel_for(rows.size(), [&](std::size_t k) {
            const std::size_t per_c = var.size() * snr.size();
            rows[k] = evaluate_mi_point(cs[k / per_c], snr[k % snr.size()], var[(k % per_c) / snr.size()], how);
        });
        RunMeta meta = mi_opts.meta("mi", cs);
        meta.snr_db = mi_snr;
        meta.sigma_sq = var;
        for (const auto& r : rows) meta.max_std_error = std::max(meta.max_std_error, r.error_bound);
        write_rows(rows, meta, mi_opts, out);
        return exit_ok;
    }

    auto run_curves = [&](const char* name, const CommonOptions& opts, const std::string& snr_text,
                          const std::string& sigma_text) {
        const auto cs = parse_constellation_list(opts.constellation);
        const auto snr = parse_db_grid(snr_text);
        const auto sigma = parse_number_list(sigma_text);
        const auto rows = curve_rows(cs, snr, sigma, opts.evaluation());
        RunMeta meta = opts.meta(name, cs);
        meta.snr_db = snr_text;
        meta.sigma_sq = sigma;
        meta.max_std_error = opts.mc_samples ? max_std_error(rows) : 0.0;
        write_rows(rows, meta, opts, out);
        return exit_ok;
    };
    if (sec_cmd->parsed()) return run_curves("secrecy", sec_opts, sec_snr, sec_sigma);
    if (sweep_cmd->parsed()) return run_curves("sweep", sweep_opts, sweep_snr, sweep_sigma);
    if (surf_cmd->parsed()) return run_curves("surface", surf_opts, surf_snr, surf_sigma);

    auto run_max = [&](const char* name, const CommonOptions& opts, const SearchFlags& flags,
                       const std::string& sigma_text, bool as_sweep) {
        const auto cs = parse_constellation_list(opts.constellation);
        const auto sigma = parse_number_list(sigma_text);
        const SearchOptions search = flags.options(opts.gh_order);
        std::vector<MaximumRow> rows;
        for (const auto& c : cs) {
            if (as_sweep) {
                for (const auto& r : sweep_max_vs_sigma(c, sigma, search)) rows.push_back({c.name(), r});
            } else {
                for (double s : sigma) rows.push_back({c.name(), find_secrecy_maximum(c, s, search)});
            }
        }
        for (const auto& r : rows) {
            if (!r.result.unimodal_ok) {
                err << "warning: " << r.constellation << " sigma^2=" << r.result.sigma_sq << ": "
                    << r.result.grid_local_maxima << " local maxima in the coarse scan\n";
            }
        }
        RunMeta meta = opts.meta(name, cs);
        meta.sigma_sq = sigma;
        meta.search = search;
        write_rows(rows, meta, opts, out);
        return exit_ok;
    };
    if (max_cmd->parsed()) return run_max("maximize", max_opts, max_search, max_sigma, false);
    if (msw_cmd->parsed()) return run_max("max-sweep", msw_opts, msw_search, msw_sigma, true);

    if (con_cmd->parsed()) {
        const Constellation c = parse_constellation_selector(con_sel);
        std::ostringstream buffer;
        if (con_format == "json") {
            nlohmann::ordered_json doc;
            doc["meta"] = {{"tool", tool_name},
                           {"version", tool_version},
                           {"command", "constellation"},
                           {"constellation", c.name()},
                           {"size", c.size()},
                           {"average_energy", average_energy(c)},
                           {"min_distance", min_distance(c)}};
            doc["rows"] = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < c.size(); ++i)
                doc["rows"].push_back({{"index", i}, {"re", c[i].real()}, {"im", c[i].imag()}});
            buffer << doc.dump(2) << '\n';
        } else {
            buffer << "index,re,im\n";
            for (std::size_t i = 0; i < c.size(); ++i)
                buffer << i << ',' << format_number(c[i].real()) << ',' << format_number(c[i].imag()) << '\n';
            err << c.name() << ": M=" << c.size() << " average_energy=" << format_number(average_energy(c))
                << " min_distance=" << format_number(min_distance(c)) << '\n';
        }
        if (con_out.empty()) {
            out << buffer.str();
        } else {
            std::ofstream file(con_out, std::ios::binary | std::ios::trunc);
            if (!(file << buffer.str())) throw Error(Errc::io, "cannot write '" + con_out + "'");
        }
        return exit_ok;
    }
    return exit_usage;
}

} // namespace

std::vector<double> parse_db_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() == 1) return {parse_double(parts[0], "dB value")};
    if (parts.size() != 3) throw Error(Errc::parse, "expected a value or start:stop:step, got '" + text + "'");
    const double start = parse_double(parts[0], "grid start");
    const double stop = parse_double(parts[1], "grid stop");
    const double step = parse_double(parts[2], "grid step");
    if (!(start < stop) || !(step > 0.0))
        throw Error(Errc::parse, "grid '" + text + "' needs start < stop and step > 0");
    return db_grid(start, stop, step);
}

std::vector<double> parse_number_list(const std::string& text) {
    if (text.find(':') != std::string::npos) return parse_db_grid(text);
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(parse_double(part, "list"));
    return out;
}

Constellation parse_constellation_selector(const std::string& selector) {
    if (selector == "bpsk") return make_bpsk();
    if (selector.rfind("psk", 0) == 0) return make_psk(parse_size(selector.substr(3), selector));
    if (selector.rfind("qam", 0) == 0) return make_qam(parse_size(selector.substr(3), selector));
    if (selector.rfind("file:", 0) == 0) {
        const std::string path = selector.substr(5);
        std::ifstream in(path);
        if (!in) throw Error(Errc::io, "cannot read constellation file '" + path + "'");
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::parse, "constellation file '" + path + "': " + e.what());
        }
        if (!doc.is_array()) throw Error(Errc::parse, "constellation file must hold an array of [re, im] pairs");
        std::vector<cplx> pts;
        for (const auto& p : doc) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                throw Error(Errc::parse, "constellation file entries must be [re, im] number pairs");
            pts.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        return from_points(pts, std::filesystem::path(path).stem().string());
    }
    throw Error(Errc::parse, "unknown constellation '" + selector + "' (expected bpsk, psk<M>, qam<M>, file:<path>)");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"", tool_name};
    try {
        return dispatch(app, args, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == Errc::parse ? exit_usage : exit_domain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_domain;
    }
}

} // namespace ccsc
