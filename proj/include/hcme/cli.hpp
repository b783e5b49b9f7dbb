#ifndef HCME_CLI_HPP
#define HCME_CLI_HPP

// Command-line front end: flat key=value configs (file plus overrides,
// later wins), comma-separated-value tables, plain-text certificates with
// fixed field order, deterministic given the seed.
//
// Exit codes: 0 success, 1 configuration, 2 tolerance breach,
// 3 exceptional parameter, 4 rank-deficient dictionary.

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hcme/continuation.hpp"
#include "hcme/decomposition.hpp"
#include "hcme/parallel.hpp"
#include "hcme/special_functions.hpp"

namespace hcme {

enum ExitCode {
    kExitOk = 0,
    kExitConfig = 1,
    kExitTolerance = 2,
    kExitExceptional = 3,
    kExitRankDeficient = 4,
};

struct RunConfig {
    std::string command;
    std::map<std::string, std::string> kv;

    bool has(const std::string& key) const { return kv.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& dflt) const {
        auto it = kv.find(key);
        return it == kv.end() ? dflt : it->second;
    }

    long get_int(const std::string& key, long dflt) const {
        auto it = kv.find(key);
        if (it == kv.end()) return dflt;
        try {
            std::size_t pos = 0;
            long v = std::stol(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument(it->second);
            return v;
        } catch (const std::exception&) {
            throw config_error("key '" + key + "' expects an integer, got '" + it->second + "'");
        }
    }

    double get_real(const std::string& key, double dflt) const {
        auto it = kv.find(key);
        if (it == kv.end()) return dflt;
        try {
            std::size_t pos = 0;
            double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument(it->second);
            return v;
        } catch (const std::exception&) {
            throw config_error("key '" + key + "' expects a real number, got '" + it->second + "'");
        }
    }

    Complex get_complex(const std::string& key, Complex dflt) const {
        auto it = kv.find(key);
        return it == kv.end() ? dflt : parse_complex(it->second);
    }

    std::vector<std::string> split_list(const std::string& text, char sep) const {
        std::vector<std::string> out;
        std::string cur;
        for (char c : text) {
            if (c == sep) {
                out.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) out.push_back(cur);
        return out;
    }

    std::vector<Complex> get_complex_list(const std::string& key, const std::string& dflt) const {
        std::string text = get_string(key, dflt);
        std::vector<Complex> out;
        for (auto& tok : split_list(text, ','))
            if (!tok.empty()) out.push_back(parse_complex(tok));
        return out;
    }

    std::vector<double> get_real_list(const std::string& key, const std::string& dflt) const {
        std::string text = get_string(key, dflt);
        std::vector<double> out;
        for (auto& tok : split_list(text, ','))
            if (!tok.empty()) out.push_back(std::stod(tok));
        return out;
    }

    Parity get_parity(const std::string& key, Parity dflt) const {
        std::string v = get_string(key, dflt == Parity::even ? "even" : "odd");
        if (v == "even") return Parity::even;
        if (v == "odd") return Parity::odd;
        throw config_error("key '" + key + "' expects even|odd, got '" + v + "'");
    }

    void require_known_keys(const std::set<std::string>& allowed) const {
        for (auto& [k, v] : kv)
            if (!allowed.count(k)) throw config_error("unknown config key '" + k + "'");
    }

    int grid() const {
        long g = get_int("grid", 256);
        if (g < 256 || g > 16384 || (g & (g - 1)))
            throw config_error("grid must be a power of two in [256, 16384]");
        return int(g);
    }

    std::uint64_t seed() const { return std::uint64_t(get_int("seed", 20240801)); }

    int threads() const {
        int t = resolve_thread_count(int(get_int("threads", 1)));
        if (t < 1 || t > 256) throw config_error("threads out of range");
        return t;
    }
};

inline void config_trim(std::string& s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    s.erase(0, i);
}

inline void apply_assignment(RunConfig& cfg, const std::string& token, const std::string& where) {
    auto eq = token.find('=');
    if (eq == std::string::npos)
        throw config_error("expected key=value in " + where + ": '" + token + "'");
    std::string key = token.substr(0, eq);
    std::string value = token.substr(eq + 1);
    config_trim(key);
    config_trim(value);
    if (key.empty()) throw config_error("empty key in " + where + ": '" + token + "'");
    cfg.kv[key] = value; // later assignments win
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        config_trim(line);
        if (line.empty() || line[0] == '#') continue;
        apply_assignment(cfg, line, "config file");
    }
}

/// hcme <command> [--config <path>] [key=value ...]
inline RunConfig parse_command_line(int argc, const char* const* argv) {
    if (argc < 2) throw config_error("usage: hcme <command> [--config <path>] [key=value ...]");
    RunConfig cfg;
    cfg.command = argv[1];
    // config file first, then positional overrides in order (later wins)
    std::vector<std::string> overrides;
    for (int i = 2; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--config") {
            if (i + 1 >= argc) throw config_error("--config expects a path");
            load_config_file(cfg, argv[++i]);
        } else {
            overrides.push_back(arg);
        }
    }
    for (auto& o : overrides) apply_assignment(cfg, o, "command line");
    return cfg;
}

namespace detail {

struct OutputFile {
    std::ofstream stream;

    explicit OutputFile(const std::string& path) : stream(path, std::ios::binary) {
        if (!stream) throw config_error("cannot open output file '" + path + "'");
    }
};

inline std::string cartan_text(const GroupElement& g) {
    CartanCoordinates cc = cartan_decompose(g);
    return "theta1=" + format_real(cc.theta1) + " t=" + format_real(cc.t) +
           " theta2=" + format_real(cc.theta2);
}

} // namespace detail

// ---------------------------------------------------------------------
// spherical: quadrature vs Legendre oracle table
// ---------------------------------------------------------------------

inline int cmd_spherical(const RunConfig& cfg) {
    cfg.require_known_keys({"s", "t", "grid", "tol", "out", "seed", "threads"});
    std::vector<Complex> ss = cfg.get_complex_list("s", "0.9i");
    if (ss.empty()) throw config_error("spherical needs at least one s value");
    std::vector<double> ts = cfg.get_real_list("t", "");
    double tol = cfg.get_real("tol", 1e-10);
    int grid = cfg.grid();
    detail::OutputFile out(cfg.get_string("out", "spherical.csv"));
    out.stream << "s,t,psi_quadrature,psi_oracle,abs_delta\n";

    struct Row {
        Complex s;
        double t;
        Complex quad, oracle;
    };
    std::vector<Row> rows(ss.size() * ts.size());
    parallel_for(int(rows.size()), cfg.threads(), [&](int i) {
        Complex s = ss[std::size_t(i) / ts.size()];
        double t = ts[std::size_t(i) % ts.size()];
        Complex quad = spherical_function(s, GroupElement::hyperbolic(t), grid);
        Complex oracle = legendre_P(s - Complex(0.5), std::cosh(Complex(t)));
        rows[std::size_t(i)] = {s, t, quad, oracle};
    });
    double max_delta = 0.0;
    for (auto& r : rows) {
        double delta = std::abs(r.quad - r.oracle);
        max_delta = std::max(max_delta, delta);
        out.stream << format_complex(r.s) << ',' << format_real(r.t) << ','
                   << format_complex(r.quad) << ',' << format_complex(r.oracle) << ','
                   << format_real(delta) << '\n';
    }
    out.stream << "# summary\n";
    out.stream << "# rows = " << rows.size() << '\n';
    out.stream << "# max_abs_delta = " << format_real(max_delta) << '\n';
    out.stream << "# tolerance = " << format_real(tol) << '\n';
    bool pass = max_delta <= tol;
    out.stream << "# result = " << (pass ? "PASS" : "FAIL") << '\n';
    std::cout << (pass ? "PASS" : "FAIL") << " max_abs_delta=" << format_real(max_delta)
              << " tol=" << format_real(tol) << '\n';
    return pass ? kExitOk : kExitTolerance;
}

// ---------------------------------------------------------------------
// matel: plot-ready matrix element table
// ---------------------------------------------------------------------

inline int cmd_matel(const RunConfig& cfg) {
    cfg.require_known_keys({"s", "m", "n", "parity", "n_g", "grid", "out", "seed", "threads"});
    std::vector<Complex> ss = cfg.get_complex_list("s", "0.9i");
    int m = int(cfg.get_int("m", 0));
    int n = int(cfg.get_int("n", 2));
    Parity parity = cfg.get_parity(
        "parity", mode_matches(Parity::even, m) ? Parity::even : Parity::odd);
    int n_g = int(cfg.get_int("n_g", 5));
    int grid = cfg.grid();
    Rng rng(cfg.seed());
    std::vector<GroupElement> gs = sample_group_list(rng, n_g);

    detail::OutputFile out(cfg.get_string("out", "matel.csv"));
    out.stream << "s,m,n,theta1,t,theta2,value\n";
    struct Row {
        Complex s;
        MatrixElementSample sample;
    };
    std::vector<Row> rows(ss.size() * gs.size());
    parallel_for(int(rows.size()), cfg.threads(), [&](int i) {
        Complex s = ss[std::size_t(i) / gs.size()];
        const GroupElement& g = gs[std::size_t(i) % gs.size()];
        Realization pi(s, parity, grid);
        rows[std::size_t(i)] = {s, sample_matrix_element(pi, m, n, g)};
    });
    for (auto& r : rows) {
        CartanCoordinates cc = cartan_decompose(r.sample.g);
        out.stream << format_complex(r.s) << ',' << r.sample.m << ',' << r.sample.n << ','
                   << format_real(cc.theta1) << ',' << format_real(cc.t) << ','
                   << format_real(cc.theta2) << ',' << format_complex(r.sample.value) << '\n';
    }
    out.stream << "# summary\n# rows = " << rows.size() << "\n# result = PASS\n";
    std::cout << "PASS rows=" << rows.size() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------
// verify-a: two-path identity sweep
// ---------------------------------------------------------------------

inline int cmd_verify_a(const RunConfig& cfg) {
    cfg.require_known_keys(
        {"n_s", "mn_max", "n_g", "grid", "tol", "out", "seed", "threads", "s"});
    int n_s = int(cfg.get_int("n_s", 20));
    int mn_max = int(cfg.get_int("mn_max", 4));
    if (mn_max < 0 || mn_max > 8) throw config_error("mn_max must be in [0, 8]");
    int n_g = int(cfg.get_int("n_g", 10));
    int grid = cfg.grid();
    double tol = cfg.get_real("tol", 1e-5);
    Rng rng(cfg.seed());
    std::vector<Complex> ss = cfg.get_complex_list("s", "");
    if (ss.empty()) {
        Rng rs = rng.fork(1);
        for (int i = 0; i < n_s; ++i) ss.push_back(sample_generic_s(rs));
    }
    Rng rg = rng.fork(2);
    std::vector<GroupElement> gs = sample_group_list(rg, n_g);

    std::vector<std::pair<int, int>> mn;
    for (int m = -mn_max; m <= mn_max; m += 2)
        for (int n = -mn_max; n <= mn_max; n += 2) mn.push_back({m, n});

    struct Cell {
        Complex s;
        int m, n;
        double max_rel_err;
    };
    std::vector<Cell> cells(ss.size() * mn.size());
    parallel_for(int(cells.size()), cfg.threads(), [&](int i) {
        Complex s = ss[std::size_t(i) / mn.size()];
        auto [m, n] = mn[std::size_t(i) % mn.size()];
        TwoPathReport rep = verify_spherical_identity(s, m, n, gs, grid);
        cells[std::size_t(i)] = {s, m, n, rep.max_rel_err};
    });

    detail::OutputFile out(cfg.get_string("out", "verify_a.csv"));
    out.stream << "s,m,n,max_rel_err\n";
    double worst = 0.0;
    for (auto& c : cells) {
        worst = std::max(worst, c.max_rel_err);
        out.stream << format_complex(c.s) << ',' << c.m << ',' << c.n << ','
                   << format_real(c.max_rel_err) << '\n';
    }
    out.stream << "# summary\n";
    out.stream << "# cells = " << cells.size() << '\n';
    out.stream << "# samples_per_cell = " << n_g << '\n';
    out.stream << "# max_rel_err = " << format_real(worst) << '\n';
    out.stream << "# tolerance = " << format_real(tol) << '\n';
    bool pass = worst < tol;
    out.stream << "# result = " << (pass ? "PASS" : "FAIL") << '\n';
    std::cout << (pass ? "PASS" : "FAIL") << " max_rel_err" << (pass ? "<" : ">=")
              << format_real(tol) << " (" << format_real(worst) << ")\n";
    return pass ? kExitOk : kExitTolerance;
}

// ---------------------------------------------------------------------
// fit: non-spherical decomposition certificate
// ---------------------------------------------------------------------

inline void write_certificate(std::ostream& os, const DecompositionCertificate& cert) {
    os << "hcme-certificate v1\n";
    os << "[target]\n";
    os << "s0 = " << format_complex(cert.s0) << '\n';
    os << "parity = " << (cert.parity == Parity::even ? "even" : "odd") << '\n';
    os << "m = " << cert.m << '\n';
    os << "n = " << cert.n << '\n';
    os << "[dictionary]\n";
    os << "ell = " << cert.dictionary.ell << '\n';
    os << "degree = " << cert.dictionary.degree << '\n';
    os << "shifts = ";
    for (std::size_t i = 0; i < cert.dictionary.shifts.size(); ++i)
        os << (i ? "," : "") << format_complex(cert.dictionary.shifts[i]);
    os << '\n';
    os << "columns = " << cert.dictionary_columns << '\n';
    os << "retained_rank = " << cert.retained_rank << '\n';
    os << "[fit]\n";
    os << "seed = " << cert.seed << '\n';
    os << "n_fit = " << cert.n_fit << '\n';
    os << "n_holdout = " << cert.n_holdout << '\n';
    os << "fit_residual = " << format_real(cert.fit_residual) << '\n';
    os << "holdout_residual = " << format_real(cert.holdout_residual) << '\n';
    os << "term_count = " << cert.term_count() << '\n';
    os << "max_word_degree = " << cert.max_word_degree() << '\n';
    os << "[terms]\n";
    for (auto& t : cert.terms)
        os << "term h=" << t.key.h_index << " p=" << word_code_text(t.key.p_code)
           << " q=" << word_code_text(t.key.q_code) << " shift="
           << format_complex(cert.dictionary.shifts[std::size_t(t.key.shift_index)])
           << " coeff=" << format_complex(t.coefficient) << '\n';
    os << "[samples.fit]\n";
    for (auto& g : cert.fit_samples) os << "g " << detail::cartan_text(g) << '\n';
    os << "[samples.holdout]\n";
    for (auto& g : cert.holdout_samples) os << "g " << detail::cartan_text(g) << '\n';
}

inline int cmd_fit(const RunConfig& cfg) {
    cfg.require_known_keys({"s0", "m", "n", "parity", "ell", "degree", "shifts", "n_fit",
                            "n_holdout", "max_terms", "grid", "tol", "out", "seed", "threads"});
    Complex s0 = cfg.get_complex("s0", {0.3, 0.9});
    int m = int(cfg.get_int("m", 1));
    int n = int(cfg.get_int("n", 1));
    Parity parity = cfg.get_parity(
        "parity", mode_matches(Parity::even, m) ? Parity::even : Parity::odd);
    DictionarySpec spec;
    spec.ell = int(cfg.get_int("ell", 1));
    spec.degree = int(cfg.get_int("degree", 2));
    spec.shifts = cfg.get_complex_list("shifts", "0.5,-0.5");
    if (spec.shifts.empty()) throw config_error("fit needs a nonempty shift list");
    int n_fit = int(cfg.get_int("n_fit", 200));
    int n_holdout = int(cfg.get_int("n_holdout", 100));
    int max_terms = int(cfg.get_int("max_terms", 40));
    double tol = cfg.get_real("tol", 1e-6);

    DecompositionCertificate cert =
        fit_decomposition(s0, parity, m, n, spec, n_fit, n_holdout, cfg.seed(), cfg.grid(), tol,
                          max_terms, cfg.threads());
    detail::OutputFile out(cfg.get_string("out", "fit_certificate.txt"));
    write_certificate(out.stream, cert);
    bool pass = cert.holdout_residual < tol;
    out.stream << "[result]\n";
    out.stream << "tolerance = " << format_real(tol) << '\n';
    out.stream << "result = " << (pass ? "PASS" : "FAIL") << '\n';
    std::cout << (pass ? "PASS" : "FAIL") << " holdout_residual="
              << format_real(cert.holdout_residual) << " terms=" << cert.term_count() << '\n';
    return pass ? kExitOk : kExitTolerance;
}

// ---------------------------------------------------------------------
// limit: circle-mean limits at exceptional (and generic) parameters
// ---------------------------------------------------------------------

inline int cmd_limit(const RunConfig& cfg) {
    cfg.require_known_keys({"s0", "pairs", "radius", "kpoints", "n_g", "scan_nmax", "scan_lo",
                            "scan_hi", "grid", "tol", "tol_stability", "out", "seed", "threads"});
    double radius = cfg.get_real("radius", 0.1);
    int kpoints = int(cfg.get_int("kpoints", 16));
    int n_g = int(cfg.get_int("n_g", 3));
    int grid = cfg.grid();
    double tol = cfg.get_real("tol", 1e-5);
    double tol_stab = cfg.get_real("tol_stability", 1e-6);

    std::vector<Complex> centers = cfg.get_complex_list("s0", "");
    if (centers.empty()) {
        int nmax = int(cfg.get_int("scan_nmax", 4));
        double lo = cfg.get_real("scan_lo", -3.0), hi = cfg.get_real("scan_hi", 3.0);
        auto zeros = exceptional_scan(Parity::even, nmax, lo, hi, 0.02, grid);
        for (double z : distinct_zero_locations(zeros)) centers.push_back(Complex(z, 0.0));
    }
    std::vector<std::pair<int, int>> pairs;
    for (auto& tok : cfg.split_list(cfg.get_string("pairs", "0,2;2,2;0,4"), ';')) {
        auto parts = cfg.split_list(tok, ',');
        if (parts.size() != 2) throw config_error("bad pairs entry '" + tok + "'");
        pairs.push_back({std::stoi(parts[0]), std::stoi(parts[1])});
    }
    Rng rng(cfg.seed());
    std::vector<GroupElement> gs = sample_group_list(rng, n_g);

    struct Row {
        Complex s0;
        int m, n;
        CartanCoordinates cc;
        Complex limit, direct;
        double rel_err, halving;
    };
    std::vector<Row> rows(centers.size() * pairs.size() * gs.size());
    parallel_for(int(rows.size()), cfg.threads(), [&](int i) {
        std::size_t per_center = pairs.size() * gs.size();
        Complex s0 = centers[std::size_t(i) / per_center];
        std::size_t rem = std::size_t(i) % per_center;
        auto [m, n] = pairs[rem / gs.size()];
        const GroupElement& g = gs[rem % gs.size()];
        Complex lim = limit_matrix_element(s0, Parity::even, m, n, g, radius, kpoints, grid);
        Complex lim_half =
            limit_matrix_element(s0, Parity::even, m, n, g, radius / 2.0, kpoints, grid);
        Complex direct = matrix_element(Realization(s0, Parity::even, grid), m, n, g);
        // guarded: targets that vanish identically fall back to a
        // 1e-3-scaled absolute comparison
        double rel = std::abs(lim - direct) / std::max(1e-3, std::abs(direct));
        double halving = std::abs(lim - lim_half) / std::max(1.0, std::abs(lim));
        rows[std::size_t(i)] = {s0, m, n, cartan_decompose(g), lim, direct, rel, halving};
    });

    detail::OutputFile out(cfg.get_string("out", "limit.csv"));
    out.stream << "s0,m,n,theta1,t,theta2,limit,direct,rel_err,halving_diff\n";
    double worst_rel = 0.0, worst_halving = 0.0;
    for (auto& r : rows) {
        worst_rel = std::max(worst_rel, r.rel_err);
        worst_halving = std::max(worst_halving, r.halving);
        out.stream << format_complex(r.s0) << ',' << r.m << ',' << r.n << ','
                   << format_real(r.cc.theta1) << ',' << format_real(r.cc.t) << ','
                   << format_real(r.cc.theta2) << ',' << format_complex(r.limit) << ','
                   << format_complex(r.direct) << ',' << format_real(r.rel_err) << ','
                   << format_real(r.halving) << '\n';
    }
    out.stream << "# summary\n";
    out.stream << "# centers = " << centers.size() << '\n';
    out.stream << "# max_rel_err = " << format_real(worst_rel) << '\n';
    out.stream << "# max_halving_diff = " << format_real(worst_halving) << '\n';
    out.stream << "# tolerance = " << format_real(tol) << '\n';
    out.stream << "# tolerance_stability = " << format_real(tol_stab) << '\n';
    bool pass = worst_rel < tol && worst_halving < tol_stab;
    out.stream << "# result = " << (pass ? "PASS" : "FAIL") << '\n';
    std::cout << (pass ? "PASS" : "FAIL") << " max_rel_err=" << format_real(worst_rel)
              << " max_halving_diff=" << format_real(worst_halving) << '\n';
    return pass ? kExitOk : kExitTolerance;
}

// ---------------------------------------------------------------------
// crown: complexified spherical functions and holomorphy probes
// ---------------------------------------------------------------------

inline int cmd_crown(const RunConfig& cfg) {
    cfg.require_known_keys({"s", "ret_min", "ret_max", "ret_count", "imt_frac", "imt_count",
                            "radius", "kpoints", "holo_centers", "word_degree", "grid", "tol",
                            "holo_tol", "control_tol", "out", "seed", "threads"});
    Complex s = cfg.get_complex("s", {0.0, 0.9});
    double ret_min = cfg.get_real("ret_min", 0.2), ret_max = cfg.get_real("ret_max", 1.0);
    int ret_count = int(cfg.get_int("ret_count", 10));
    double imt_frac = cfg.get_real("imt_frac", 0.45);
    if (imt_frac < 0.0 || imt_frac > 0.45)
        throw config_error("imt_frac must lie in [0, 0.45]");
    int imt_count = int(cfg.get_int("imt_count", 10));
    int grid = std::max(cfg.has("grid") ? cfg.grid() : 2048, 2048);
    double tol = cfg.get_real("tol", 1e-9);
    double holo_tol = cfg.get_real("holo_tol", 1e-7);
    double control_tol = cfg.get_real("control_tol", 1e-2);
    double radius = cfg.get_real("radius", 0.1);
    int kpoints = int(cfg.get_int("kpoints", 16));
    int holo_centers = int(cfg.get_int("holo_centers", 10));
    int word_degree = int(cfg.get_int("word_degree", 2));
    if (word_degree < 0 || word_degree > 2) throw config_error("word_degree must be in [0, 2]");

    detail::OutputFile out(cfg.get_string("out", "crown.csv"));
    out.stream << "section,re_t,im_t,value,oracle,residual\n";

    // oracle grid
    struct Cell {
        Complex t;
        Complex value, oracle;
        double delta;
    };
    std::vector<Cell> cells(std::size_t(ret_count) * std::size_t(imt_count));
    parallel_for(int(cells.size()), cfg.threads(), [&](int i) {
        int ri = i / imt_count, ii = i % imt_count;
        double re = ret_count == 1 ? ret_min
                                   : ret_min + (ret_max - ret_min) * double(ri) / (ret_count - 1);
        double im = imt_count == 1
                        ? 0.0
                        : -imt_frac * kPi + 2.0 * imt_frac * kPi * double(ii) / (imt_count - 1);
        ComplexCartanPoint p(Complex{re, im});
        Complex v = complexified_spherical(s, p, grid);
        Complex o = legendre_P(s - Complex(0.5), std::cosh(p.t));
        cells[std::size_t(i)] = {p.t, v, o, std::abs(v - o) / std::max(1.0, std::abs(o))};
    });
    double worst_oracle = 0.0;
    for (auto& c : cells) {
        worst_oracle = std::max(worst_oracle, c.delta);
        out.stream << "oracle," << format_real(c.t.real()) << ',' << format_real(c.t.imag())
                   << ',' << format_complex(c.value) << ',' << format_complex(c.oracle) << ','
                   << format_real(c.delta) << '\n';
    }

    // holomorphy probes for derivative words of degree <= word_degree
    Rng rng(cfg.seed());
    std::vector<EnvelopingWord> words{EnvelopingWord::empty()};
    if (word_degree >= 1)
        words.push_back(
            EnvelopingWord::monomial(Complex(1.0), {{Side::right, LieAlgebraElement::raise()}}));
    if (word_degree >= 2)
        words.push_back(EnvelopingWord::monomial(Complex(1.0),
                                                 {{Side::left, LieAlgebraElement::lower()},
                                                  {Side::right, LieAlgebraElement::raise()}}));
    struct Probe {
        Complex center;
        int word;
        double residual;
    };
    std::vector<Complex> centers;
    for (int i = 0; i < holo_centers; ++i)
        centers.push_back({rng.uniform(0.3, 0.9),
                           rng.uniform(-1.0, 1.0) * (imt_frac * kPi - 1.5 * radius)});
    std::vector<Probe> probes(centers.size() * words.size());
    parallel_for(int(probes.size()), cfg.threads(), [&](int i) {
        Complex center = centers[std::size_t(i) / words.size()];
        int wi = int(std::size_t(i) % words.size());
        auto f = [&](Complex t) {
            return derivative_word_continuation(s, words[std::size_t(wi)],
                                                ComplexCartanPoint(t), 1024);
        };
        probes[std::size_t(i)] = {center, wi, holomorphy_test(f, center, radius, kpoints)};
    });
    double worst_holo = 0.0;
    for (auto& p : probes) {
        worst_holo = std::max(worst_holo, p.residual);
        out.stream << "holomorphy_word" << p.word << ',' << format_real(p.center.real()) << ','
                   << format_real(p.center.imag()) << ",,," << format_real(p.residual) << '\n';
    }

    // anti-holomorphic negative control
    Complex control_center{0.6, 0.5};
    double control = holomorphy_test([](Complex t) { return std::conj(t); }, control_center,
                                     radius, kpoints);
    out.stream << "control_antiholomorphic," << format_real(control_center.real()) << ','
               << format_real(control_center.imag()) << ",,," << format_real(control) << '\n';

    out.stream << "# summary\n";
    out.stream << "# max_oracle_rel_err = " << format_real(worst_oracle) << '\n';
    out.stream << "# max_holomorphy_residual = " << format_real(worst_holo) << '\n';
    out.stream << "# control_residual = " << format_real(control) << '\n';
    out.stream << "# tolerance = " << format_real(tol) << '\n';
    out.stream << "# holo_tolerance = " << format_real(holo_tol) << '\n';
    out.stream << "# control_tolerance = " << format_real(control_tol) << '\n';
    bool pass = worst_oracle < tol && worst_holo < holo_tol && control > control_tol;
    out.stream << "# result = " << (pass ? "PASS" : "FAIL") << '\n';
    std::cout << (pass ? "PASS" : "FAIL") << " oracle=" << format_real(worst_oracle)
              << " holomorphy=" << format_real(worst_holo)
              << " control=" << format_real(control) << '\n';
    return pass ? kExitOk : kExitTolerance;
}

// ---------------------------------------------------------------------
// selftest: a fast subset of every suite
// ---------------------------------------------------------------------

inline int cmd_selftest(const RunConfig& cfg) {
    cfg.require_known_keys({"seed", "threads", "grid", "out"});
    Rng rng(cfg.seed());
    bool ok = true;
    auto report = [&](const char* name, bool pass) {
        std::cout << (pass ? "PASS " : "FAIL ") << name << '\n';
        ok = ok && pass;
    };

    {
        Complex q = spherical_function({0.0, 0.9}, GroupElement::hyperbolic(0.7));
        report("spherical_oracle", std::abs(q - Complex(0.87676329114234844919)) < 1e-10);
    }
    {
        Realization pi({0.2, 0.6}, Parity::even, 256);
        GroupElement g1 = sample_group(rng, 0.2, 1.0), g2 = sample_group(rng, 0.2, 1.0);
        Complex a = matrix_element(pi, 2, 0, compose(g1, g2));
        // group law through the action path
        KTypeVector e0 = KTypeVector::basis(Parity::even, 0);
        std::vector<Complex> f(256);
        for (int k = 0; k < 256; ++k) f[std::size_t(k)] = Complex(1.0);
        auto gf = act(pi, g2, f);
        auto ggf = act(pi, g1, gf);
        Complex acc(0.0);
        for (int k = 0; k < 256; ++k) {
            double th = pi.theta(k);
            acc += ggf[std::size_t(k)] * Complex(std::cos(2 * th), -std::sin(2 * th));
        }
        acc /= 256.0;
        report("representation_group_law", std::abs(a - acc) < 1e-9 * std::max(1.0, std::abs(a)));
    }
    {
        auto gs = sample_group_list(rng, 3);
        TwoPathReport rep = verify_spherical_identity({0.3, 0.8}, 0, 2, gs);
        report("two_path_identity", rep.max_rel_err < 1e-6);
    }
    {
        Complex v = complexified_spherical({0.0, 0.9}, ComplexCartanPoint(Complex{0.7, 1.13}));
        report("crown_oracle",
               std::abs(v - Complex(1.1423395838322127469, -0.48649174007657042119)) < 1e-9);
    }
    return ok ? kExitOk : kExitTolerance;
}

// ---------------------------------------------------------------------

inline int run_command(const RunConfig& cfg) {
    if (cfg.command == "spherical") return cmd_spherical(cfg);
    if (cfg.command == "matel") return cmd_matel(cfg);
    if (cfg.command == "verify-a") return cmd_verify_a(cfg);
    if (cfg.command == "fit") return cmd_fit(cfg);
    if (cfg.command == "limit") return cmd_limit(cfg);
    if (cfg.command == "crown") return cmd_crown(cfg);
    if (cfg.command == "selftest") return cmd_selftest(cfg);
    throw config_error("unknown command '" + cfg.command +
                       "' (expected spherical|matel|verify-a|fit|limit|crown|selftest)");
}

inline int run_cli(int argc, const char* const* argv) {
    try {
        RunConfig cfg = parse_command_line(argc, argv);
        return run_command(cfg);
    } catch (const exceptional_parameter_error& e) {
        std::cerr << "error (exceptional parameter): " << e.what() << '\n';
        return kExitExceptional;
    } catch (const rank_deficient_error& e) {
        std::cerr << "error (rank-deficient dictionary): " << e.what() << '\n';
        return kExitRankDeficient;
    } catch (const overfit_error& e) {
        std::cerr << "error (overfit): " << e.what() << '\n';
        return kExitTolerance;
    } catch (const non_removable_error& e) {
        std::cerr << "error (non-removable): " << e.what() << '\n';
        return kExitTolerance;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

} // namespace hcme

#endif
