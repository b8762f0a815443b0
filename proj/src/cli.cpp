#include "cft3m/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace cft3m {

using nlohmann::ordered_json;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("CFT3M_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            raise(ErrorCode::malformed_input,
                  std::string("CFT3M_SEED is not an integer: '") + env + "'");
        return v;
    }
    return kDefaultSeed;
}

namespace {

OutputFormat resolve_format(const RunConfig& config, OutputFormat fallback) {
    return config.format == OutputFormat::automatic ? fallback
                                                    : config.format;
}

ordered_json factor_array(const std::vector<Int>& factors) {
    ordered_json a = ordered_json::array();
    for (const Int& d : factors) a.push_back(to_int64(d));
    return a;
}

std::string factor_text(const std::vector<Int>& factors) {
    if (factors.empty()) return "()";
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < factors.size(); ++i)
        os << factors[i] << (i + 1 < factors.size() ? "," : "");
    os << ")";
    return os.str();
}

// --- splitting -------------------------------------------------------------

int run_splitting(const RunConfig& config, std::ostream& out) {
    const LinkFile file = load_link_file(config.input_path);
    if (!file.covering)
        raise(ErrorCode::malformed_input,
              config.input_path + ": no covering declared");
    const std::size_t knot = file.ctx.require_index(config.knot);
    const CoveringSpec& spec = *file.covering;
    const SplittingData s = splitting_data(file.ctx, spec, knot);
    const bool branched = spec.branch().contains(knot);

    std::vector<Int> residues, moduli;
    if (!branched && spec.is_standard()) {
        const auto& mods = spec.standard_moduli();
        std::size_t pos = 0;
        for (std::size_t b : spec.branch().indices()) {
            Int res = file.ctx.lk(knot, b) % mods[pos];
            if (res < 0) res += mods[pos];
            residues.push_back(res);
            moduli.push_back(mods[pos]);
            ++pos;
        }
    }

    if (resolve_format(config, OutputFormat::text) == OutputFormat::json) {
        ordered_json j;
        j["instance"] = config.input_path;
        j["knot"] = config.knot;
        j["branched"] = branched;
        j["e"] = to_int64(s.e);
        j["f"] = to_int64(s.f);
        j["r"] = to_int64(s.r);
        j["n"] = to_int64(s.n);
        if (!residues.empty()) {
            j["residues"] = factor_array(residues);
            j["moduli"] = factor_array(moduli);
        }
        out << j.dump() << "\n";
    } else {
        out << "e=" << s.e << " f=" << s.f << " r=" << s.r << " n=" << s.n
            << "\n";
        if (!residues.empty()) {
            out << "residues:";
            for (std::size_t i = 0; i < residues.size(); ++i)
                out << (i ? ", " : " ") << residues[i] << " mod "
                    << moduli[i];
            out << "\n";
        }
    }
    return 0;
}

// --- local -----------------------------------------------------------------

TorusSubgroup parse_subgroup(const std::string& text) {
    std::vector<std::vector<Int>> rows;
    std::stringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) {
        std::stringstream rs(row);
        std::string entry;
        std::vector<Int> parsed;
        while (std::getline(rs, entry, ',')) {
            try {
                parsed.emplace_back(entry);
            } catch (const std::exception&) {
                raise(ErrorCode::malformed_input,
                      "subgroup entry '" + entry +
                          "' is not an integer (expected \"a,b;c,d\")");
            }
        }
        if (parsed.size() != 2)
            raise(ErrorCode::malformed_input,
                  "subgroup row '" + row +
                      "' must have exactly 2 entries (expected \"a,b;c,d\")");
        rows.push_back(std::move(parsed));
    }
    if (rows.empty())
        raise(ErrorCode::malformed_input, "empty subgroup specification");
    return TorusSubgroup::from_generators(IntMatrix::from_rows(rows));
}

int run_local(const RunConfig& config, std::ostream& out) {
    const TorusSubgroup h = parse_subgroup(config.subgroup);
    const auto inv = local_invariants(h); // infinite_index -> exit 2
    const FinGenAbGroup deck = deck_group(h);

    if (resolve_format(config, OutputFormat::text) == OutputFormat::json) {
        ordered_json j;
        ordered_json basis = ordered_json::array();
        for (std::size_t i = 0; i < h.basis().rows(); ++i)
            basis.push_back(ordered_json::array(
                {to_int64(h.basis().at(i, 0)), to_int64(h.basis().at(i, 1))}));
        j["subgroup"] = basis;
        j["index"] = to_int64(h.index());
        j["e"] = to_int64(inv.e);
        j["f"] = to_int64(inv.f);
        j["deck"] = factor_array(deck.invariant_factors());
        j["unramified"] = is_unramified(h);
        out << j.dump() << "\n";
    } else {
        out << "subgroup " << h.to_string() << " index=" << h.index()
            << " e=" << inv.e << " f=" << inv.f << " deck=" << deck.to_string()
            << (is_unramified(h) ? " (unramified)" : "") << "\n";
    }
    return 0;
}

// --- verify ----------------------------------------------------------------

struct TheoremResult {
    std::string theorem;
    std::vector<Int> lhs, rhs;
    bool pass;
    std::string detail;
};

TheoremResult verify_31(const LinkContext& ctx, const CoveringSpec& spec) {
    const auto report = verify_efr(ctx, spec);
    TheoremResult r{"3.1", {}, {}, report.pass, ""};
    for (const auto& row : report.rows) {
        r.lhs.push_back(row.n);
        r.rhs.push_back(row.e * row.f * row.r);
    }
    std::ostringstream os;
    os << "n = efr for " << report.rows.size() << " knots";
    r.detail = os.str();
    return r;
}

TheoremResult verify_58(const LinkContext& ctx, std::uint64_t seed,
                        std::size_t cases) {
    Rng rng(seed);
    bool ok = true;
    for (std::size_t i = 0; i < cases && ok; ++i) {
        Idele a = Idele::zero(ctx);
        for (auto& c : a.components) {
            c.q = rng.uniform(-10, 10);
            c.p = rng.uniform(-10, 10);
        }
        const auto split = split_unit_principal(ctx, a);
        ok = is_unit(split.unit) && is_principal(ctx, split.principal);
        for (std::size_t k = 0; ok && k < ctx.size(); ++k)
            ok = split.unit.components[k].q + split.principal.components[k].q ==
                     a.components[k].q &&
                 split.unit.components[k].p + split.principal.components[k].p ==
                     a.components[k].p;
    }
    const FinGenAbGroup coker = unit_principal_cokernel(ctx);
    ok = ok && coker.is_trivial();
    TheoremResult r{"5.8", coker.invariant_factors(), {}, ok, ""};
    std::ostringstream os;
    os << "unit+principal split exact on " << cases
       << " random ideles, cokernel " << coker.to_string();
    r.detail = os.str();
    return r;
}

TheoremResult verify_59(const LinkContext& ctx, const CoveringSpec& spec) {
    const auto report = verify_reciprocity_iso(ctx, spec);
    TheoremResult r{"5.9", report.lhs_factors, report.rhs_factors,
                    report.pass, ""};
    std::ostringstream os;
    os << "idele class quotient " << factor_text(report.lhs_factors)
       << " vs deck group " << factor_text(report.rhs_factors)
       << (report.well_defined ? "" : "; induced map not well-defined")
       << (report.surjective ? "" : "; induced map not surjective");
    r.detail = os.str();
    return r;
}

TheoremResult verify_511(const LinkContext& ctx, const CoveringSpec& spec) {
    bool ok = true;
    for (std::size_t k = 0; k < ctx.size() && ok; ++k) {
        const auto behavior = knot_behavior(ctx, spec, k);
        const auto s = splitting_data(ctx, spec, k);
        ok = behavior.unbranched == (s.e == 1) &&
             behavior.completely_decomposed == (s.e == 1 && s.f == 1);
    }
    TheoremResult r{"5.11", {}, {}, ok, ""};
    std::ostringstream os;
    os << "decomposition/ramification behavior agrees for " << ctx.size()
       << " knots";
    r.detail = os.str();
    return r;
}

int run_verify(const RunConfig& config, std::ostream& out) {
    const LinkFile file = load_link_file(config.input_path);

    std::vector<std::string> theorems = config.theorems;
    if (theorems.empty()) {
        theorems = file.covering
                       ? std::vector<std::string>{"3.1", "5.8", "5.9", "5.11"}
                       : std::vector<std::string>{"5.8"};
    }

    std::vector<TheoremResult> results;
    for (const auto& t : theorems) {
        if (t == "5.8") {
            results.push_back(verify_58(file.ctx, config.seed, config.cases));
            continue;
        }
        if (!file.covering)
            raise(ErrorCode::malformed_input,
                  config.input_path + ": check " + t +
                      " needs a covering declaration");
        if (t == "3.1")
            results.push_back(verify_31(file.ctx, *file.covering));
        else if (t == "5.9")
            results.push_back(verify_59(file.ctx, *file.covering));
        else if (t == "5.11")
            results.push_back(verify_511(file.ctx, *file.covering));
        else
            raise(ErrorCode::malformed_input,
                  "unknown check '" + t + "' (use 3.1, 5.8, 5.9 or 5.11)");
    }

    bool all_pass = true;
    for (const auto& r : results) all_pass = all_pass && r.pass;

    if (resolve_format(config, OutputFormat::json) == OutputFormat::json) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : results) {
            ordered_json j;
            j["instance"] = config.input_path;
            j["theorem"] = r.theorem;
            j["lhs_factors"] = factor_array(r.lhs);
            j["rhs_factors"] = factor_array(r.rhs);
            j["pass"] = r.pass;
            arr.push_back(j);
        }
        out << arr.dump() << "\n";
    } else {
        for (const auto& r : results)
            out << r.theorem << ": " << (r.pass ? "pass" : "FAIL") << " ("
                << r.detail << ")\n";
    }
    return all_pass ? 0 : 1;
}

// --- report ----------------------------------------------------------------

int run_report(const RunConfig& config, std::ostream& out) {
    const LinkFile file = load_link_file(config.input_path);

    ordered_json j;
    j["instance"] = config.input_path;
    j["knots"] = file.ctx.knot_names();
    bool pass = true;

    if (file.covering) {
        const CoveringSpec& spec = *file.covering;
        ordered_json covering;
        ordered_json branch = ordered_json::array();
        for (std::size_t b : spec.branch().indices())
            branch.push_back(file.ctx.name(b));
        covering["branch"] = branch;
        covering["group"] = factor_array(spec.target().invariant_factors());
        covering["order"] = to_int64(spec.target().order());
        covering["standard"] = spec.is_standard();
        j["covering"] = covering;

        const auto efr = verify_efr(file.ctx, spec);
        ordered_json table = ordered_json::array();
        for (const auto& row : efr.rows) {
            ordered_json entry;
            entry["knot"] = row.knot;
            entry["branched"] = row.branched;
            entry["e"] = to_int64(row.e);
            entry["f"] = to_int64(row.f);
            entry["r"] = to_int64(row.r);
            entry["n"] = to_int64(row.n);
            const auto behavior = knot_behavior(file.ctx, spec,
                                                file.ctx.require_index(row.knot));
            entry["completely_decomposed"] = behavior.completely_decomposed;
            entry["unbranched"] = behavior.unbranched;
            table.push_back(entry);
        }
        j["splitting"] = table;
        pass = pass && efr.pass;

        const auto iso = verify_reciprocity_iso(file.ctx, spec);
        ordered_json reciprocity;
        reciprocity["lhs_factors"] = factor_array(iso.lhs_factors);
        reciprocity["rhs_factors"] = factor_array(iso.rhs_factors);
        reciprocity["well_defined"] = iso.well_defined;
        reciprocity["surjective"] = iso.surjective;
        reciprocity["pass"] = iso.pass;
        j["reciprocity"] = reciprocity;
        pass = pass && iso.pass;
    }

    const FinGenAbGroup coker = unit_principal_cokernel(file.ctx);
    j["unit_principal_cokernel"] = factor_array(coker.invariant_factors());
    pass = pass && coker.is_trivial();

    j["pass"] = pass;
    out << j.dump(2) << "\n";
    return pass ? 0 : 1;
}

// --- selftest ----------------------------------------------------------------

int run_selftest_command(const RunConfig& config, std::ostream& out,
                         std::ostream& err) {
    if (config.cases < 1)
        raise(ErrorCode::malformed_input, "selftest needs --cases >= 1");
    const int failures = run_selftest(config.seed, config.cases, out, err);
    return failures == 0 ? 0 : 1;
}

} // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        switch (config.command) {
        case Command::splitting: return run_splitting(config, out);
        case Command::local: return run_local(config, out);
        case Command::verify: return run_verify(config, out);
        case Command::selftest: return run_selftest_command(config, out, err);
        case Command::report: return run_report(config, out);
        }
        raise(ErrorCode::malformed_input, "unknown command");
    } catch (const Error& e) {
        err << "error [" << error_code_name(e.code()) << "]: " << e.what()
            << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int cli_main(int argc, char** argv) {
    CLI::App app{"class-field invariants of abelian branched coverings "
                 "from linking data"};
    app.require_subcommand(1);

    RunConfig config;
    std::string format = "auto";
    bool seed_given = false;

    const auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format: text or json")
            ->check(CLI::IsMember({"auto", "text", "json"}));
    };

    auto* splitting = app.add_subcommand(
        "splitting", "splitting invariants (e, f, r, n) of one knot");
    splitting->add_option("--link", config.input_path, "link file (JSON)")
        ->required();
    splitting->add_option("--knot", config.knot, "knot name")->required();
    add_format(splitting);

    auto* local = app.add_subcommand(
        "local", "local invariants of a finite-index subgroup of Z^2");
    local
        ->add_option("--subgroup", config.subgroup,
                     "two generator rows \"a,b;c,d\"")
        ->required();
    add_format(local);

    auto* verify = app.add_subcommand(
        "verify", "verify the covering identities on a link file");
    verify->add_option("--link", config.input_path, "link file (JSON)")
        ->required();
    verify
        ->add_option("--theorem", config.theorems,
                     "restrict to one or more checks")
        ->check(CLI::IsMember({"3.1", "5.8", "5.9", "5.11"}));
    verify->add_option("--seed", config.seed, "seed for randomized checks")
        ->each([&](const std::string&) { seed_given = true; });
    verify->add_option("--cases", config.cases,
                       "random ideles per randomized check");
    add_format(verify);

    auto* selftest = app.add_subcommand(
        "selftest", "randomized verification corpus (one JSON line each)");
    selftest->add_option("--seed", config.seed, "corpus seed")
        ->each([&](const std::string&) { seed_given = true; });
    selftest->add_option("--cases", config.cases, "number of instances");
    add_format(selftest);

    auto* report = app.add_subcommand(
        "report", "full JSON report of every check on a link file");
    report->add_option("--link", config.input_path, "link file (JSON)")
        ->required();
    add_format(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cout, std::cerr);
        return 2;
    }

    if (splitting->parsed()) config.command = Command::splitting;
    if (local->parsed()) config.command = Command::local;
    if (verify->parsed()) config.command = Command::verify;
    if (selftest->parsed()) config.command = Command::selftest;
    if (report->parsed()) config.command = Command::report;

    if (format == "text") config.format = OutputFormat::text;
    if (format == "json") config.format = OutputFormat::json;

    if (!seed_given) {
        try {
            config.seed = default_seed();
        } catch (const Error& e) {
            std::cerr << "error [" << error_code_name(e.code())
                      << "]: " << e.what() << "\n";
            return 2;
        }
    }

    return run(config, std::cout, std::cerr);
}

} // namespace cft3m
