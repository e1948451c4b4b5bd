#pragma once

// Command-line front end. Each subcommand parses its flags, calls into the
// library and hands a Table to the shared emitter.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "divgraph/constructors.hpp"
#include "divgraph/corridor.hpp"
#include "divgraph/graph_model.hpp"
#include "divgraph/number_core.hpp"
#include "divgraph/oracle.hpp"
#include "divgraph/report.hpp"
#include "divgraph/ss_sets.hpp"
#include "json.hpp"

namespace divgraph::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240521;

enum Exit : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_identity = 2,
    exit_validation = 3,
};

struct Common {
    std::string format = "csv";
    std::string out;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 1;
};

struct Report {
    explicit Report(std::vector<std::string> columns) : table(std::move(columns)) {}
    Table table;
    int status = exit_ok;
    std::optional<nlohmann::json> records;  // replaces "rows" in JSON output
};

namespace detail {

inline std::string join(std::span<const u64> v, const char* sep = " ") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

inline std::string join_chains(const std::vector<Chain>& chains) {
    std::string s;
    for (std::size_t i = 0; i < chains.size(); ++i) {
        if (i) s += '|';
        s += join(chains[i].elements(), "-");
    }
    return s;
}

inline std::string components_text(const ComponentDecomposition& d) {
    std::string s;
    for (const Component& c : d.components) {
        if (!s.empty()) s += ';';
        s += std::to_string(c.first) + "-" + std::to_string(c.last) + ":" + std::to_string(c.label);
    }
    return s;
}

inline std::string optional_text(const std::optional<u64>& v) { return v ? std::to_string(*v) : std::string(); }

/// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += threads) fn(i);
        });
    }
    for (auto& t : workers) t.join();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands

struct SnArgs {
    std::vector<u64> n;
    u64 from = 0;
    u64 to = 0;
};

inline Report cmd_sn(const SnArgs& a) {
    Report r({"n", "S_n", "omega", "P_min", "P_max", "max_divisor_ratio", "S_eq_n_times_ratio"});
    std::vector<u64> ns = a.n;
    if (a.from && a.to) {
        for (u64 n = a.from; n <= a.to; ++n) ns.push_back(n);
    }
    if (ns.empty()) throw CLI::ValidationError("sn", "give --n or --from/--to");
    for (u64 n : ns) {
        if (n == 0) throw std::domain_error("sn: n must be >= 1");
        const Factorization f = factor(n);
        const u64 s = schinzel_szekeres(f);
        std::string ratio;
        const bool formula = dense_divisor_formula_holds(n);
        if (n >= 2) {
            const Rational q = max_divisor_ratio(n);
            std::ostringstream os;
            os << q;
            ratio = os.str();
        }
        std::ostringstream pmin;
        pmin << f.smallest_prime();
        r.table.add_row({n, s, static_cast<u64>(f.omega()), pmin.str(), f.largest_prime(), ratio, formula});
    }
    return r;
}

struct SetsArgs {
    u64 x = 0;
    std::optional<u64> z;
    std::optional<u64> t;
    bool list = false;
};

inline Report cmd_sets(const SetsArgs& a) {
    std::vector<std::string> cols{"x", "A_x", "B_x"};
    const bool xzt = a.z && a.t;
    if ((a.z.has_value()) != (a.t.has_value())) throw CLI::ValidationError("sets", "--z and --t go together");
    if (xzt) cols.insert(cols.end(), {"z", "t", "A_xzt"});
    if (a.list) cols.insert(cols.end(), {"A_list", "B_list"});
    if (a.list && xzt) cols.push_back("A_xzt_list");
    Report r(cols);
    const auto A = enumerate_A(a.x);
    const auto B = enumerate_B(a.x);
    std::vector<Cell> row{a.x, static_cast<u64>(A.size()), static_cast<u64>(B.size())};
    std::vector<u64> axzt;
    if (xzt) {
        axzt = enumerate_A_xzt(a.x, *a.z, *a.t);
        row.insert(row.end(), {*a.z, *a.t, static_cast<u64>(axzt.size())});
    }
    if (a.list) row.insert(row.end(), {detail::join(A), detail::join(B)});
    if (a.list && xzt) row.push_back(detail::join(axzt));
    r.table.add_row(std::move(row));
    return r;
}

struct IdentitiesArgs {
    u64 from = 2;
    u64 to = 100'000;
    std::size_t points = 0;  // 0 = every integer
};

inline Report cmd_identities(const IdentitiesArgs& a, const Common& c) {
    if (a.from < 2 || a.from > a.to) throw CLI::ValidationError("identities", "need 2 <= from <= to");
    Report r({"x", "A_x", "B_x", "sum_inv_b", "floor_residual", "parity_residual"});
    std::vector<SetSweepRow> rows;
    if (a.points == 0) {
        rows = sweep_sets(a.from, a.to, c.threads);
    } else {
        const auto xs = geometric_points(a.from, a.to, a.points);
        rows.resize(xs.size());
        detail::parallel_for(xs.size(), c.threads, [&](std::size_t i) { rows[i] = set_row(xs[i]); });
    }
    for (const SetSweepRow& row : rows) {
        if (row.floor_identity_residual != 0 || row.parity_identity_residual != 0) r.status = exit_identity;
        r.table.add_row({row.x, row.count_A, row.count_B, row.harmonic_B, row.floor_identity_residual,
                         row.parity_identity_residual});
    }
    return r;
}

struct SumsArgs {
    u64 from = 1'000;
    u64 to = 1'000'000;
    std::vector<u64> t{2, 16, 256};
};

inline Report cmd_sums(const SumsArgs& a, const Common& c) {
    if (a.from < 2 || a.from > a.to) throw CLI::ValidationError("sums", "need 2 <= from <= to");
    Report r({"x", "sum_inv_b", "drift", "t", "tail_sum", "tail_times_log_x_over_log_t"});
    const auto xs = doubling_grid(a.from, a.to);
    std::vector<std::vector<std::vector<Cell>>> rows(xs.size());
    detail::parallel_for(xs.size(), c.threads, [&](std::size_t i) {
        const u64 x = xs[i];
        const CorridorPoint p{x, 0, 0, harmonic_sum_B(x)};
        for (u64 t : a.t) {
            if (t > x) continue;
            const double tail = tail_sum_B(x, t);
            const double scaled = tail * std::log(static_cast<double>(x)) / std::log(static_cast<double>(t));
            rows[i].push_back({x, p.sum_inv_b, p.drift(), t, tail, scaled});
        }
    });
    for (auto& block : rows) {
        for (auto& row : block) r.table.add_row(std::move(row));
    }
    return r;
}

struct EtaArgs {
    std::size_t t_points = 200;
    std::size_t s_points = 200;
    double t_max = 1e6;
    std::size_t random = 10'000;
    double tolerance = 1e-12;
};

inline Report cmd_eta(const EtaArgs& a, const Common& c) {
    Report r({"kind", "t", "points", "eta_min", "s_at_min"});
    for (double t : log_space(1.0, a.t_max, a.t_points)) {
        const EtaSample m = eta_min_over_s(t, a.s_points);
        if (m.value < -a.tolerance) r.status = exit_identity;
        r.table.add_row({std::string("grid"), t, static_cast<u64>(a.s_points), m.value, m.s});
    }
    if (a.random > 0) {
        const EtaSample m = eta_min_random(a.random, a.t_max, c.seed);
        if (m.value < -a.tolerance) r.status = exit_identity;
        r.table.add_row({std::string("random"), m.t, static_cast<u64>(a.random), m.value, m.s});
    }
    return r;
}

struct Lemma211Args {
    std::vector<u64> x{10'000, 100'000};
    std::vector<u64> ratio{4, 16, 64, 256};
    u64 families = 10'000;
};

inline Report cmd_lemma211(const Lemma211Args& a, const Common& c) {
    Report r({"x", "y", "ratio", "families", "min_margin", "max_lhs", "margin_positive", "admissible",
              "smallest_positive_ratio"});
    for (u64 x : a.x) {
        std::vector<u64> ys;
        for (u64 q : a.ratio) {
            if (q < 2 || x / q < 1) throw CLI::ValidationError("lemma211", "need ratio >= 2 and x/ratio >= 1");
            ys.push_back(x / q);
        }
        std::vector<Lemma211Summary> sums(ys.size());
        detail::parallel_for(ys.size(), c.threads,
                             [&](std::size_t i) { sums[i] = lemma211_search(x, ys[i], a.families, c.seed + i); });
        std::optional<u64> smallest;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            if (sums[i].min_margin > 0 && (!smallest || a.ratio[i] < *smallest)) smallest = a.ratio[i];
        }
        for (std::size_t i = 0; i < ys.size(); ++i) {
            const Lemma211Summary& s = sums[i];
            if (!s.all_admissible) r.status = exit_validation;
            r.table.add_row({x, s.y, a.ratio[i], s.families, s.min_margin, s.max_lhs, s.min_margin > 0,
                             s.all_admissible, detail::optional_text(smallest)});
        }
    }
    return r;
}

struct ChainArgs {
    u64 x = 0;
    bool full_range = false;
    std::string in;
    std::string export_to;
};

inline Report cmd_chain(const ChainArgs& a) {
    Report r({"index", "x", "relation", "length", "valid", "violation", "elements_in_A", "components"});
    std::vector<Chain> chains;
    Relation rel = Relation::divisor();
    if (!a.in.empty()) {
        std::ifstream f(a.in);
        if (!f) throw std::runtime_error("cannot open " + a.in);
        ChainFile file = read_chains(f);
        chains = std::move(file.chains);
        rel = file.relation;
    } else {
        if (a.x < 1) throw CLI::ValidationError("chain", "give --x or --in");
        chains.push_back(a.full_range ? long_chain(a.x) : chain_in_A(a.x));
    }
    for (std::size_t i = 0; i < chains.size(); ++i) {
        const Chain& ch = chains[i];
        u64 x = a.x;
        if (x == 0) x = rel.kind == RelationKind::lcm_bounded ? rel.bound : (ch.empty() ? 1 : *std::max_element(ch.elements().begin(), ch.elements().end()));
        const ChainCheck check = validate_chain(ch);
        if (!check) r.status = exit_validation;
        u64 in_a = 0;
        std::string comps;
        const bool in_range = std::all_of(ch.elements().begin(), ch.elements().end(), [&](u64 e) { return e >= 1 && e <= x; });
        if (in_range) {
            for (u64 e : ch.elements()) in_a += in_A(e, x);
            comps = detail::components_text(decompose_components(ch, x));
        } else {
            r.status = exit_validation;
            comps = "elements outside [1, x]";
        }
        r.table.add_row({static_cast<u64>(i), x,
                         std::string(rel.kind == RelationKind::divisor ? "divisor" : "lcm"),
                         static_cast<u64>(ch.length()), check.ok(), check.message, in_a, comps});
    }
    if (!a.export_to.empty()) {
        std::ostringstream os;
        write_chains(os, rel, chains);
        detail::write_file(a.export_to, os.str());
    }
    return r;
}

struct PackArgs {
    u64 x = 0;
    u64 z = 0;
    std::string export_to;
};

inline Report cmd_pack(const PackArgs& a) {
    Report r({"x", "z", "method", "chains", "covered", "audit_ok", "audit_message"});
    const ChainPacking recursive = pack_chains(a.x, a.z);
    const ChainPacking geometric = geometric_chains(a.x, a.z);
    for (const auto& [name, p] : {std::pair<const char*, const ChainPacking&>{"recursive", recursive},
                                  std::pair<const char*, const ChainPacking&>{"geometric", geometric}}) {
        const PackingAudit audit = audit_packing(p);
        if (!audit) r.status = exit_validation;
        r.table.add_row({a.x, a.z, std::string(name), static_cast<u64>(p.chains.size()), p.covered(), audit.ok,
                         audit.message});
    }
    if (!a.export_to.empty()) {
        std::ostringstream os;
        write_packing(os, recursive);
        detail::write_file(a.export_to, os.str());
    }
    return r;
}

struct OracleArgs {
    std::string quantity;
    u64 x = 0;
    std::optional<u64> y;
    std::optional<u64> z;
};

inline Report cmd_oracle(const OracleArgs& a) {
    const Quantity q = quantity_from_string(a.quantity);
    auto need = [](const std::optional<u64>& v, const char* name) {
        if (!v) throw CLI::ValidationError("oracle", std::string("this quantity needs --") + name);
        return *v;
    };
    OracleResult res;
    switch (q) {
        case Quantity::f: res = brute_f(a.x); break;
        case Quantity::g: res = brute_g(a.x); break;
        case Quantity::f_a: res = brute_f_a(a.x); break;
        case Quantity::R: res = brute_R(a.x, need(a.z, "z")); break;
        case Quantity::T: res = brute_T(a.x, need(a.z, "z")); break;
        case Quantity::F: res = brute_F(a.x, need(a.y, "y")); break;
        case Quantity::G: res = brute_G(a.x, need(a.y, "y")); break;
    }
    Report r({"quantity", "x", "y", "z", "value", "witness"});
    r.table.add_row({to_string(res.quantity), res.x, detail::optional_text(res.y), detail::optional_text(res.z),
                     res.value, detail::join_chains(res.witness)});
    r.records = nlohmann::json::array({res});
    return r;
}

struct BoundsArgs {
    std::string kind = "sets";
    u64 from = 1'000;
    u64 to = 10'000'000;
    std::vector<u64> x{8, 12, 100, 1'000};
    std::vector<u64> y{2, 4};
    u64 z = 0;  // 0 = ceil(x/y)
};

inline Report cmd_bounds_sets(const BoundsArgs& a, const Common& c) {
    Report r({"x", "A_x", "B_x", "sum_inv_b", "A_log_x_over_x", "B_log_x_over_x", "drift", "A_in_corridor",
              "B_in_corridor", "drift_in_corridor"});
    if (a.from < 2 || a.from > a.to) throw CLI::ValidationError("bounds", "need 2 <= from <= to");
    const auto xs = doubling_grid(a.from, a.to);
    std::vector<CorridorPoint> pts(xs.size());
    detail::parallel_for(xs.size(), c.threads, [&](std::size_t i) { pts[i] = corridor_point(xs[i]); });
    const Corridor ca = pilot::a_ratio(), cb = pilot::b_ratio(), cd = pilot::drift();
    for (const CorridorPoint& p : pts) {
        const bool ia = ca.contains(p.a_ratio()), ib = cb.contains(p.b_ratio()), id = cd.contains(p.drift());
        if (!(ia && ib && id)) r.status = exit_validation;
        r.table.add_row({p.x, p.count_A, p.count_B, p.sum_inv_b, p.a_ratio(), p.b_ratio(), p.drift(), ia, ib, id});
    }
    return r;
}

inline Report cmd_bounds_packing(const BoundsArgs& a) {
    Report r({"x", "y", "z", "single_chain", "packing_length", "packing_covered", "F_lower", "exact_F", "exact_T",
              "exact_G", "consistent"});
    for (u64 x : a.x) {
        for (u64 y : a.y) {
            if (y > x) continue;
            const u64 z = a.z ? a.z : ceil_div(x, y);
            const BoundsEntry e = lift_reductions(x, y, z);
            if (!e.consistent) r.status = exit_validation;
            r.table.add_row({e.x, e.y, e.z, e.single_chain, e.packing_length, e.packing_covered, e.f_lower(),
                             detail::optional_text(e.exact_F), detail::optional_text(e.exact_T),
                             detail::optional_text(e.exact_G), e.consistent});
        }
    }
    return r;
}

// ---------------------------------------------------------------------------

inline void emit(const Report& r, const Common& c, const std::string& command, double seconds, std::ostream& os) {
    if (c.format == "json") {
        nlohmann::json meta{{"version", kVersion},   {"command", command},          {"seed", c.seed},
                            {"threads", c.threads}, {"elapsed_seconds", seconds}, {"columns", r.table.columns()}};
        if (r.records) {
            os << nlohmann::json{{"metadata", meta}, {"records", *r.records}}.dump(2) << '\n';
        } else {
            r.table.write_json(os, meta);
        }
    } else {
        r.table.write_csv(os);
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Schinzel-Szekeres sets, divisor chains and chain packings"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--out", common.out, "write the report to FILE instead of stdout");
    app.add_option("--seed", common.seed, "seed for random searches")->capture_default_str();
    app.add_option("--threads", common.threads, "worker threads for sweeps")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();

    SnArgs sn;
    auto* sn_cmd = app.add_subcommand("sn", "S(n), its prime data and the dense-divisor ratio");
    sn_cmd->add_option("--n", sn.n, "values of n")->delimiter(',');
    sn_cmd->add_option("--from", sn.from, "first n of a range");
    sn_cmd->add_option("--to", sn.to, "last n of a range");

    SetsArgs sets;
    auto* sets_cmd = app.add_subcommand("sets", "count or list A(x), B(x) and A(x,z,t)");
    sets_cmd->add_option("--x", sets.x)->required()->check(CLI::PositiveNumber);
    sets_cmd->add_option("--z", sets.z);
    sets_cmd->add_option("--t", sets.t);
    sets_cmd->add_flag("--list", sets.list, "include the elements");

    IdentitiesArgs ids;
    auto* ids_cmd = app.add_subcommand("identities", "floor and parity identities over a range of x");
    ids_cmd->add_option("--from", ids.from)->capture_default_str();
    ids_cmd->add_option("--to", ids.to)->capture_default_str();
    ids_cmd->add_option("--points", ids.points, "geometric sample size instead of every integer");

    SumsArgs sums;
    auto* sums_cmd = app.add_subcommand("sums", "harmonic sum and tail sums over B(x), doubling grid");
    sums_cmd->add_option("--from", sums.from)->capture_default_str();
    sums_cmd->add_option("--to", sums.to)->capture_default_str();
    sums_cmd->add_option("--t", sums.t)->delimiter(',')->capture_default_str();

    EtaArgs eta_args;
    auto* eta_cmd = app.add_subcommand("eta", "minimum of eta(s,t) on a log grid and at random points");
    eta_cmd->add_option("--t-points", eta_args.t_points)->capture_default_str();
    eta_cmd->add_option("--s-points", eta_args.s_points)->capture_default_str();
    eta_cmd->add_option("--t-max", eta_args.t_max)->capture_default_str();
    eta_cmd->add_option("--random", eta_args.random)->capture_default_str();

    Lemma211Args l211;
    auto* l211_cmd = app.add_subcommand("lemma211", "weighted-sum margin over random weight families");
    l211_cmd->add_option("--x", l211.x)->delimiter(',')->capture_default_str();
    l211_cmd->add_option("--ratio", l211.ratio, "values of x/y")->delimiter(',')->capture_default_str();
    l211_cmd->add_option("--families", l211.families)->capture_default_str();

    ChainArgs chain;
    auto* chain_cmd = app.add_subcommand("chain", "build, validate and decompose divisor chains");
    chain_cmd->add_option("--x", chain.x);
    chain_cmd->add_flag("--full-range", chain.full_range, "build over [1, x] instead of A(x)");
    chain_cmd->add_option("--in", chain.in, "validate chains read from FILE");
    chain_cmd->add_option("--export", chain.export_to, "write the chains to FILE");

    PackArgs pack;
    auto* pack_cmd = app.add_subcommand("pack", "recursive and geometric packings of length-z chains");
    pack_cmd->add_option("--x", pack.x)->required()->check(CLI::PositiveNumber);
    pack_cmd->add_option("--z", pack.z)->required()->check(CLI::PositiveNumber);
    pack_cmd->add_option("--export", pack.export_to, "write the recursive packing to FILE");

    OracleArgs oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "exact f, g, f_a, R, T, F, G for small x");
    oracle_cmd->add_option("--quantity", oracle.quantity)
        ->required()
        ->check(CLI::IsMember({"f", "g", "f_a", "R", "T", "F", "G"}));
    oracle_cmd->add_option("--x", oracle.x)->required()->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--y", oracle.y);
    oracle_cmd->add_option("--z", oracle.z);

    BoundsArgs bounds;
    auto* bounds_cmd = app.add_subcommand("bounds", "growth corridors (sets) or packing reductions (packing)");
    bounds_cmd->add_option("--kind", bounds.kind)->check(CLI::IsMember({"sets", "packing"}))->capture_default_str();
    bounds_cmd->add_option("--from", bounds.from)->capture_default_str();
    bounds_cmd->add_option("--to", bounds.to)->capture_default_str();
    bounds_cmd->add_option("--x", bounds.x)->delimiter(',')->capture_default_str();
    bounds_cmd->add_option("--y", bounds.y)->delimiter(',')->capture_default_str();
    bounds_cmd->add_option("--z", bounds.z, "chain length for T and G (default ceil(x/y))");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    const auto start = std::chrono::steady_clock::now();
    std::optional<Report> report;
    std::string command;
    try {
        CLI::App* sub = app.get_subcommands().front();
        command = sub->get_name();
        if (sub == sn_cmd) report = cmd_sn(sn);
        else if (sub == sets_cmd) report = cmd_sets(sets);
        else if (sub == ids_cmd) report = cmd_identities(ids, common);
        else if (sub == sums_cmd) report = cmd_sums(sums, common);
        else if (sub == eta_cmd) report = cmd_eta(eta_args, common);
        else if (sub == l211_cmd) report = cmd_lemma211(l211, common);
        else if (sub == chain_cmd) report = cmd_chain(chain);
        else if (sub == pack_cmd) report = cmd_pack(pack);
        else if (sub == oracle_cmd) report = cmd_oracle(oracle);
        else if (bounds.kind == "sets") report = cmd_bounds_sets(bounds, common);
        else report = cmd_bounds_packing(bounds);
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (common.out.empty()) {
        emit(*report, common, command, seconds, out);
    } else {
        std::ofstream f(common.out);
        if (!f) {
            err << "error: cannot open " << common.out << '\n';
            return exit_usage;
        }
        emit(*report, common, command, seconds, f);
    }
    if (report->status == exit_identity) err << command << ": identity violated\n";
    if (report->status == exit_validation) err << command << ": validation failed\n";
    return report->status;
}

}  // namespace divgraph::cli
