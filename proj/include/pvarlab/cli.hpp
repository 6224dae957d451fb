#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pvarlab/grid.hpp"
#include "pvarlab/harness.hpp"
#include "pvarlab/io.hpp"
#include "pvarlab/mixednorm.hpp"
#include "pvarlab/modulus.hpp"
#include "pvarlab/pvar1d.hpp"
#include "pvarlab/smoothness.hpp"
#include "pvarlab/vitali2d.hpp"

namespace pvarlab {

namespace cli {

/// Thrown for bad arguments found after CLI11 parsing; maps to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Options {
    double p = 2.0;
    std::string grid;  // input file, also accepted positionally
    std::uint64_t seed = 7;
    std::string out;
    std::string format = "csv";
    std::optional<std::size_t> oracle_limit;
    bool cap_override = false;

    // gen
    std::string kind;
    int n = 1;
    int m = 1;
    std::int64_t size = 64;
    std::int64_t rows = 0;
    int terms = 1;

    // modulus
    std::string modulus_kind = "auto";

    // verify
    std::vector<std::string> suites{"all"};
    bool inject_failure = false;

    // sweep
    std::string family = "t1xt1";
    std::vector<double> p_list;
    std::vector<int> n_list;
};

inline AnyGrid load_input(const Options& o) {
    if (o.grid.empty()) throw UsageError("an input grid file is required");
    return load_csv(o.grid);
}

inline Grid2 load_grid2(const Options& o) {
    auto g = load_input(o);
    if (auto* f = std::get_if<Grid2>(&g)) return std::move(*f);
    throw UsageError("'" + o.grid + "' holds a 1D grid, a 2D grid is required");
}

/// Writes `body` to --out if given, otherwise to `out`.
inline void emit(const Options& o, std::ostream& out, const std::string& body) {
    if (o.out.empty()) {
        out << body;
        return;
    }
    std::ofstream file(o.out);
    if (!file) throw std::runtime_error("cannot write '" + o.out + "'");
    file << body;
}

inline ojson enclosure_json(const Enclosure& e) {
    ojson j;
    j["lo"] = e.lo;
    j["hi"] = e.hi;
    j["domain"] = {e.domain.u_min, e.domain.u_max, e.domain.v_min, e.domain.v_max};
    if (e.tail) j["tail_estimate"] = *e.tail;
    return j;
}

inline std::string indices_text(const CyclicPartition& part) {
    std::string s;
    for (std::size_t k = 0; k < part.size(); ++k) {
        if (k) s += ' ';
        s += std::to_string(part[k]);
    }
    return s;
}

inline std::string run_gen(const Options& o) {
    const Exponent p(o.p);
    const std::int64_t N = o.size;
    const std::int64_t M = o.rows > 0 ? o.rows : N;
    std::ostringstream s;
    Rng rng(o.seed);
    if (o.kind == "tent") {
        write_csv(s, gen_tent_scaled(o.n, N));
    } else if (o.kind == "sine") {
        write_csv(s, gen_sine(o.n, N));
    } else if (o.kind == "gn") {
        write_csv(s, gen_gn(o.n, N));
    } else if (o.kind == "staircase") {
        write_csv(s, gen_staircase(N));
    } else if (o.kind == "series") {
        write_csv(s, gen_series_f(o.terms, p, N).grid);
    } else if (o.kind == "sine-product") {
        write_csv(s, gen_product(gen_sine(o.n, M), gen_sine(o.m, N)));
    } else if (o.kind == "tent-product") {
        write_csv(s, gen_product(gen_tent_scaled(o.n, M), gen_tent_scaled(o.m, N)));
    } else if (o.kind == "trigpoly") {
        write_csv(s, gen_trigpoly(random_trig_coefficients(rng, o.n, o.m), M, N).value);
    } else if (o.kind == "random1") {
        write_csv(s, random_grid1(rng, static_cast<std::size_t>(N)));
    } else if (o.kind == "random2") {
        write_csv(s, random_grid2(rng, static_cast<std::size_t>(M), static_cast<std::size_t>(N)));
    } else if (o.kind == "cumulative") {
        write_csv(s, gen_cumulative(random_mean_zero(rng, static_cast<std::size_t>(M), static_cast<std::size_t>(N))));
    } else {
        throw UsageError("unknown generator '" + o.kind + "'");
    }
    return s.str();
}

inline std::string run_pvar(const Options& o) {
    const Exponent p(o.p);
    auto g = load_input(o);
    std::ostringstream s;
    if (auto* row = std::get_if<Grid1>(&g)) {
        const auto r = pvar_cyclic(*row, p);
        if (o.format == "json") {
            ojson j;
            j["p"] = o.p;
            j["value"] = r.value;
            j["partition"] = r.partition.indices();
            s << j.dump(2) << '\n';
        } else {
            s << format_double(r.value) << '\n';
        }
        return s.str();
    }
    // 2D input: one value per row section
    const auto& f = std::get<Grid2>(g);
    const auto phi = phi_profile(f, p);
    if (o.format == "json") {
        ojson j;
        j["p"] = o.p;
        j["rows"] = std::vector<double>(phi.values.samples().begin(), phi.values.samples().end());
        s << j.dump(2) << '\n';
    } else {
        write_profile_csv(s, phi);
    }
    return s.str();
}

inline std::string run_vitali(const Options& o) {
    const Exponent p(o.p);
    const Grid2 f = load_grid2(o);
    const std::size_t limit = o.oracle_limit.value_or(kVitaliOracleLimit);
    if (limit > kVitaliOracleLimit) throw UsageError("--oracle-limit above " + std::to_string(kVitaliOracleLimit));
    const auto e = vitali_certified(f, p, limit);
    std::ostringstream s;
    if (o.format == "json") {
        ojson j;
        j["p"] = o.p;
        j["lower"] = e.lower;
        if (e.upper) j["upper"] = *e.upper;
        j["method"] = e.method;
        j["net"] = {{"rows", e.net.rows.indices()}, {"cols", e.net.cols.indices()}};
        s << j.dump(2) << '\n';
    } else {
        s << "key,value\n";
        s << "lower," << format_double(e.lower) << '\n';
        if (e.upper) s << "upper," << format_double(*e.upper) << '\n';
        s << "method," << e.method << '\n';
        s << "net_rows," << indices_text(e.net.rows) << '\n';
        s << "net_cols," << indices_text(e.net.cols) << '\n';
    }
    return s.str();
}

inline std::string run_modulus(const Options& o) {
    const Exponent p(o.p);
    auto g = load_input(o);
    std::ostringstream s;
    auto table_json_1d = [&](const ModulusTable1D& t) {
        ojson j;
        j["p"] = t.p;
        j["resolution"] = t.resolution();
        j["values"] = t.values;
        return j;
    };
    if (auto* row = std::get_if<Grid1>(&g)) {
        if (o.modulus_kind != "auto" && o.modulus_kind != "1d") throw UsageError("1D input supports --kind 1d only");
        const auto t = modulus_1d(*row, p);
        if (o.format == "json") {
            s << table_json_1d(t).dump(2) << '\n';
        } else {
            write_table_csv(s, t);
        }
        return s.str();
    }
    const auto& f = std::get<Grid2>(g);
    if (o.modulus_kind == "iso") {
        const auto t = modulus_iso_2d(f, p);
        if (o.format == "json") {
            s << table_json_1d(t).dump(2) << '\n';
        } else {
            write_table_csv(s, t);
        }
        return s.str();
    }
    if (o.modulus_kind != "auto" && o.modulus_kind != "mixed") {
        throw UsageError("2D input supports --kind mixed or iso");
    }
    const auto t = modulus_mixed(f, p, o.cap_override);
    if (o.format == "json") {
        ojson j;
        j["p"] = t.p;
        j["rows"] = t.rows;
        j["cols"] = t.cols;
        j["values"] = t.values;
        s << j.dump(2) << '\n';
    } else {
        write_table_csv(s, t);
    }
    return s.str();
}

inline std::string run_integrals(const Options& o) {
    const Exponent p(o.p);
    detail::require_singular_exponent(p);
    auto g = load_input(o);
    std::vector<std::pair<std::string, Enclosure>> rows;
    if (auto* row = std::get_if<Grid1>(&g)) {
        rows.emplace_back("J", integral_J(modulus_1d(*row, p)));
    } else {
        const auto& f = std::get<Grid2>(g);
        const auto table = modulus_mixed(f, p, o.cap_override);
        rows.emplace_back("J", integral_J(modulus_iso_2d(f, p)));
        rows.emplace_back("K", integral_K(table));
        rows.emplace_back("I", integral_I(table));
    }
    std::ostringstream s;
    if (o.format == "json") {
        ojson j;
        j["p"] = o.p;
        for (const auto& [name, e] : rows) j[name] = enclosure_json(e);
        s << j.dump(2) << '\n';
    } else {
        s << "integral,lo,hi,tail_estimate\n";
        for (const auto& [name, e] : rows) {
            s << name << ',' << format_double(e.lo) << ',' << format_double(e.hi) << ','
              << (e.tail ? format_double(*e.tail) : std::string()) << '\n';
        }
    }
    return s.str();
}

inline std::string run_wp(const Options& o) {
    const Exponent p(o.p);
    const Grid2 f = load_grid2(o);
    const double wp = W_p(f, p);
    std::ostringstream s;
    std::optional<WpEstimate> est;
    if (!p.is_one()) est = W_p_estimate_check(f, p, o.cap_override);
    if (o.format == "json") {
        ojson j;
        j["p"] = o.p;
        j["W_p"] = wp;
        const auto phi = phi_profile(f, p), psi = psi_profile(f, p);
        j["phi"] = std::vector<double>(phi.values.samples().begin(), phi.values.samples().end());
        j["psi"] = std::vector<double>(psi.values.samples().begin(), psi.values.samples().end());
        if (est) {
            j["W_p_core"] = est->wp;
            j["bracket"] = {{"omega11", est->bracket.omega11},
                            {"k_term", est->bracket.k_term},
                            {"i_term", est->bracket.i_term},
                            {"total", est->bracket.total()}};
            if (!est->constant.skipped) j["A_obs"] = est->constant.value;
        }
        s << j.dump(2) << '\n';
    } else {
        s << "key,value\n";
        s << "W_p," << format_double(wp) << '\n';
        if (est) {
            s << "W_p_core," << format_double(est->wp) << '\n';
            s << "bracket," << format_double(est->bracket.total()) << '\n';
            if (!est->constant.skipped) s << "A_obs," << format_double(est->constant.value) << '\n';
        }
    }
    return s.str();
}

inline int run_verify(const Options& o, std::ostream& out, std::ostream& err) {
    SuiteConfig cfg;
    cfg.seed = o.seed;
    cfg.cap_override = o.cap_override;
    cfg.inject_failure = o.inject_failure;
    if (o.oracle_limit) {
        cfg.oracle_limit_2d = *o.oracle_limit;
        cfg.vitali_oracle_size = std::min(cfg.vitali_oracle_size, *o.oracle_limit);
    }
    if (!(o.suites.size() == 1 && o.suites[0] == "all")) cfg.suites = o.suites;
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    const CheckReport report = run_suite(cfg);
    emit(o, out, report.to_json().dump(2) + "\n");
    err << "verify: " << report.checks.size() << " checks, " << report.failures() << " failed\n";
    for (const auto& c : report.checks)
        if (!c.pass) err << "  FAIL " << c.id << " (" << c.anchor << ")\n";
    return report.exit_code();
}

inline std::string run_sweep(const Options& o) {
    SweepFamily family;
    try {
        family = parse_sweep_family(o.family);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::vector<double> ps = o.p_list.empty() ? std::vector<double>{o.p} : o.p_list;
    const std::vector<int> ns = o.n_list.empty() ? std::vector<int>{1} : o.n_list;
    for (int n : ns)
        if (n < 1) throw UsageError("--n values must be positive");
    const auto rows = sharpness_sweep(family, ps, ns, 32, o.seed);
    std::ostringstream s;
    if (o.format == "json") {
        CheckReport r;
        r.sweeps = rows;
        s << r.to_json()["sweeps"].dump(2) << '\n';
    } else {
        write_sweep_csv(s, rows);
    }
    return s.str();
}

}  // namespace cli

/// Entry point of the pvarlab tool. 0 on success, 1 on failed checks or
/// runtime errors, 2 on usage errors.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
    cli::Options o;
    CLI::App app{"p-variation, moduli of continuity and smoothness integrals on periodic grids", "pvarlab"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--p", o.p, "exponent p >= 1");
    app.add_option("--grid", o.grid, "input grid CSV");
    app.add_option("--seed", o.seed, "random seed");
    app.add_option("--out", o.out, "output path (default stdout)");
    app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--oracle-limit", o.oracle_limit, "largest size handed to the exhaustive oracles");
    app.add_flag("--cap-override", o.cap_override, "allow mixed tables above the size cap");

    auto* gen = app.add_subcommand("gen", "write a generated grid as CSV");
    gen->add_option("kind", o.kind,
                    "tent|sine|gn|staircase|series|sine-product|tent-product|trigpoly|random1|random2|cumulative")
        ->required();
    gen->add_option("--n", o.n, "frequency / index along x");
    gen->add_option("--m", o.m, "frequency along y");
    gen->add_option("--N", o.size, "grid size (columns for 2D)");
    gen->add_option("--M", o.rows, "rows for 2D grids (default N)");
    gen->add_option("--terms", o.terms, "number of series terms");

    auto* pv = app.add_subcommand("pvar", "Wiener p-variation of a 1D grid (per row for 2D)");
    auto* vit = app.add_subcommand("vitali", "bivariate p-variation of a 2D grid");
    auto* mod = app.add_subcommand("modulus", "modulus of continuity table");
    mod->add_option("--kind", o.modulus_kind, "auto|1d|iso|mixed");
    auto* integ = app.add_subcommand("integrals", "enclosures of the smoothness integrals");
    auto* wp = app.add_subcommand("wp", "W_p of a 2D grid");
    for (auto* sub : {pv, vit, mod, integ, wp}) sub->add_option("file", o.grid, "input grid CSV");

    auto* ver = app.add_subcommand("verify", "run the inequality suites and write a JSON report");
    ver->add_option("--suite", o.suites, "suite names or 'all'")->delimiter(',');
    ver->add_flag("--inject-failure", o.inject_failure, "add a deliberately failing check");

    auto* sw = app.add_subcommand("sweep", "sharpness sweep rows");
    sw->add_option("--family", o.family, "t1xt1|tnxt1|tnxtn|trigpoly");
    sw->add_option("--ps", o.p_list, "exponents")->delimiter(',');
    sw->add_option("--n", o.n_list, "orders")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*ver) return cli::run_verify(o, out, err);
        std::string body;
        if (*gen) {
            body = cli::run_gen(o);
        } else if (*pv) {
            body = cli::run_pvar(o);
        } else if (*vit) {
            body = cli::run_vitali(o);
        } else if (*mod) {
            body = cli::run_modulus(o);
        } else if (*integ) {
            body = cli::run_integrals(o);
        } else if (*wp) {
            body = cli::run_wp(o);
        } else if (*sw) {
            body = cli::run_sweep(o);
        }
        cli::emit(o, out, body);
        return 0;
    } catch (const cli::UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace pvarlab
