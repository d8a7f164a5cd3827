/**
 * @file gerbegw_cli.cpp
 * @brief Command-line front end for the gerbe Gromov-Witten engine.
 *
 * Subcommands: invariant, sectors, verify, chartable, potential, nodes.
 * Groups and characters are residue tuples, curve classes are integer
 * vectors, cohomology classes go by basis label. Output is deterministic:
 * identical configuration means byte-identical output.
 *
 * Exit codes: 0 success, 1 identity failure, 2 parse error, 3 domain
 * error, 4 limits exceeded.
 */

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gerbegw/abelian.hpp"
#include "gerbegw/base_theory.hpp"
#include "gerbegw/curve_class.hpp"
#include "gerbegw/cyclotomic.hpp"
#include "gerbegw/errors.hpp"
#include "gerbegw/frobenius.hpp"
#include "gerbegw/gerbe_core.hpp"
#include "gerbegw/gerbe_gw.hpp"
#include "gerbegw/json_io.hpp"
#include "gerbegw/potentials.hpp"

namespace {

using namespace gerbegw;

std::vector<long> parse_int_list(const std::string& s, char sep) {
    std::vector<long> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        if (item.empty()) throw ParseError("empty entry in list '" + s + "'");
        size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(item, &pos);
        } catch (const std::exception&) {
            throw ParseError("bad integer '" + item + "'");
        }
        if (pos != item.size()) throw ParseError("bad integer '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ParseError("empty list '" + s + "'");
    return out;
}

/// "r=2,L=1" or "r=2x3,L=1;1": cyclic factors joined by 'x', one functional
/// coefficient row per factor joined by ';', row entries by ','.
GerbeSpec parse_gerbe(const std::string& s) {
    auto lpos = s.find(",L=");
    if (s.rfind("r=", 0) != 0 || lpos == std::string::npos)
        throw ParseError("gerbe spec must look like r=<f1>x<f2>...,L=<row1>;<row2>...");
    std::vector<long> factors = parse_int_list(s.substr(2, lpos - 2), 'x');
    std::string rows = s.substr(lpos + 3);
    std::vector<std::vector<long>> kappa;
    std::string row;
    std::istringstream in(rows);
    while (std::getline(in, row, ';')) kappa.push_back(parse_int_list(row, ','));
    if (kappa.size() != factors.size())
        throw ParseError("gerbe spec needs one L row per cyclic factor");
    return GerbeSpec(AbelianGroup(factors), kappa);
}

struct ParsedInsertion {
    bool is_rho = false;
    std::vector<long> residues;
    std::string class_label;
    unsigned psi = 0;
};

/// "g=1:pt", "g=1,2:pt:1", "rho=0,2:H".
ParsedInsertion parse_insertion(const std::string& s) {
    ParsedInsertion out;
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ':')) parts.push_back(item);
    if (parts.size() < 2 || parts.size() > 3)
        throw ParseError("insertion must be g=...:<class>[:psi] or rho=...:<class>[:psi]");
    if (parts[0].rfind("g=", 0) == 0) {
        out.is_rho = false;
        out.residues = parse_int_list(parts[0].substr(2), ',');
    } else if (parts[0].rfind("rho=", 0) == 0) {
        out.is_rho = true;
        out.residues = parse_int_list(parts[0].substr(4), ',');
    } else {
        throw ParseError("insertion must start with g= or rho=");
    }
    out.class_label = parts[1];
    if (out.class_label.empty()) throw ParseError("missing class label in insertion");
    if (parts.size() == 3) {
        long p = parse_int_list(parts[2], ',').at(0);
        if (p < 0) throw ParseError("psi power must be non-negative");
        out.psi = static_cast<unsigned>(p);
    }
    return out;
}

long global_limit(long cli_limit) {
    if (cli_limit > 0) return cli_limit;
    if (const char* env = std::getenv("GERBEGW_LIMIT")) {
        try {
            return std::stol(env);
        } catch (const std::exception&) {
            throw ParseError("GERBEGW_LIMIT is not an integer");
        }
    }
    return 1 << 20;
}

std::string cyc_str(const CycNumber& z) {
    if (auto r = z.as_rational()) return r->str();
    std::string s;
    bool first = true;
    for (size_t k = 0; k < z.coeffs().size(); ++k) {
        const auto& c = z.coeffs()[k];
        if (c.is_zero()) continue;
        if (!first) s += " + ";
        s += "(" + c.str() + ")";
        if (k > 0) s += "*z" + std::to_string(z.level()) + "^" + std::to_string(k);
        first = false;
    }
    return first ? "0" : s;
}

struct CommonOpts {
    std::string base = "P2";
    std::string table;
    std::string gerbe;
    std::string format = "human";
    long limit = 0;
    double tol = 1e-9;
    uint64_t seed = 1;
};

BaseTheory load_base(const CommonOpts& opts) {
    if (!opts.table.empty()) return ingest_table(opts.table);
    return builtin_theory(opts.base);
}

int cmd_invariant(const CommonOpts& opts, const std::string& beta_str,
                  const std::vector<std::string>& ins_strs) {
    BaseTheory th = load_base(opts);
    GerbeSpec spec = parse_gerbe(opts.gerbe);
    CurveClass beta(parse_int_list(beta_str, ','));

    bool any_rho = false, any_g = false;
    std::vector<ParsedInsertion> parsed;
    for (const auto& s : ins_strs) {
        parsed.push_back(parse_insertion(s));
        (parsed.back().is_rho ? any_rho : any_g) = true;
    }
    if (any_rho && any_g) throw ParseError("cannot mix g= and rho= insertions in one query");

    nlohmann::json j{{"schema", 1}};
    if (any_rho) {
        std::vector<RhoInsertion> ins;
        for (const auto& p : parsed)
            ins.push_back({Character(spec.group(), p.residues), th.basis().index_of(p.class_label),
                           p.psi});
        CycNumber v = rho_invariant(spec, th, ins, beta);
        if (opts.format == "json") {
            j["value"] = value_to_json(v);
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << cyc_str(v) << "\n";
        }
    } else {
        std::vector<TwistedInsertion> ins;
        for (const auto& p : parsed)
            ins.push_back({GroupElement(spec.group(), p.residues),
                           th.basis().index_of(p.class_label), p.psi});
        Rational v = twisted_invariant(spec, th, ins, beta);
        if (opts.format == "json") {
            j["value"] = v.str();
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << v.str() << "\n";
        }
    }
    return 0;
}

int cmd_sectors(const CommonOpts& opts, const std::string& beta_str, long n) {
    GerbeSpec spec = parse_gerbe(opts.gerbe);
    CurveClass beta(parse_int_list(beta_str, ','));
    auto vectors = enumerate_admissible_vectors(spec, static_cast<size_t>(n), beta,
                                                global_limit(opts.limit));
    if (opts.format == "json") {
        nlohmann::json j{{"schema", 1}, {"count", vectors.size()}};
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& vec : vectors) {
            nlohmann::json row = nlohmann::json::array();
            for (const auto& g : vec) {
                nlohmann::json entry{{"g", g.residues()}};
                nlohmann::json triples = nlohmann::json::array();
                for (const auto& s : sector_data(spec, g))
                    triples.push_back({{"rho", s.rho}, {"r", s.r_i}, {"m", s.m_i}});
                entry["triples"] = triples;
                row.push_back(entry);
            }
            rows.push_back(row);
        }
        j["vectors"] = rows;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "admissible vectors: " << vectors.size() << "\n";
    for (const auto& vec : vectors) {
        std::string line;
        for (size_t i = 0; i < vec.size(); ++i) {
            if (i) line += "  ";
            line += "g" + std::to_string(i + 1) + "=(";
            const auto& res = vec[i].residues();
            for (size_t jx = 0; jx < res.size(); ++jx)
                line += (jx ? "," : "") + std::to_string(res[jx]);
            line += ")";
            auto data = sector_data(spec, vec[i]);
            line += " [";
            for (size_t jx = 0; jx < data.size(); ++jx) {
                if (jx) line += "; ";
                line += "rho=" + std::to_string(data[jx].rho) + ",r=" +
                        std::to_string(data[jx].r_i) + ",m=" + std::to_string(data[jx].m_i);
            }
            line += "]";
        }
        std::cout << line << "\n";
    }
    return 0;
}

int cmd_verify(const CommonOpts& opts, const std::string& beta_max_str, long n_max, long psi_max) {
    BaseTheory th = load_base(opts);
    GerbeSpec spec = parse_gerbe(opts.gerbe);
    Truncation tr{CurveClass(parse_int_list(beta_max_str, ',')), static_cast<unsigned>(n_max),
                  static_cast<unsigned>(psi_max)};
    long limit = global_limit(opts.limit);

    DecompositionReport report = verify_decomposition(spec, th, tr, limit);
    bool blocks_ok = check_block_diagonal(spec, th, tr.beta_max);

    // Numerical side report; never gates the exit code.
    QuantumProduct qp = gerbe_quantum_product(spec, th, tr.beta_max);
    std::vector<std::complex<double>> q_one(spec.h2_rank(), {1.0, 0.0});
    std::vector<Rational> q_one_exact(spec.h2_rank(), Rational(1));
    auto probe = semisimplicity_probe(qp, q_one, opts.tol, opts.seed, q_one_exact);
    const char* verdict = probe.verdict == SemisimplicityVerdict::semisimple ? "semisimple"
                          : probe.verdict == SemisimplicityVerdict::degenerate ? "degenerate"
                                                                               : "inconclusive";

    size_t transform_checked = 0;
    bool transform_ok = true;
    size_t pt_index = th.basis().rank() - 1;
    for (const auto& beta : classes_up_to(tr.beta_max)) {
        for (size_t n = 2; n <= std::min<size_t>(tr.n_max, 4); ++n) {
            if (beta.is_zero() && n < 3) continue;
            for (const auto& vec : enumerate_admissible_vectors(spec, n, beta, limit)) {
                std::vector<TwistedInsertion> ins;
                for (const auto& g : vec) ins.push_back({g, pt_index, 0});
                ++transform_checked;
                if (!(twisted_from_rho(spec, th, ins, beta) == twisted_invariant(spec, th, ins, beta)))
                    transform_ok = false;
            }
        }
    }

    bool all_ok = report.equal && blocks_ok && transform_ok;
    if (opts.format == "json") {
        nlohmann::json j{{"schema", 1},
                         {"decomposition", to_json(report, th)},
                         {"block_diagonal", blocks_ok},
                         {"transform_consistency",
                          {{"checked", transform_checked}, {"equal", transform_ok}}},
                         {"semisimplicity_probe", {{"verdict", verdict}, {"seed", opts.seed}}},
                         {"pass", all_ok}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "decomposition identity: " << (report.equal ? "PASS" : "FAIL") << " ("
                  << report.checked_terms << " terms)\n";
        if (!report.equal && report.witness) {
            std::cout << "  first discrepancy at beta=" << report.witness->key.beta.str()
                      << " lhs=" << cyc_str(report.witness->lhs)
                      << " rhs=" << cyc_str(report.witness->rhs) << "\n";
        }
        std::cout << "block diagonality:      " << (blocks_ok ? "PASS" : "FAIL") << "\n";
        std::cout << "transform consistency:  " << (transform_ok ? "PASS" : "FAIL") << " ("
                  << transform_checked << " queries)\n";
        std::cout << "semisimplicity at q=1:  " << verdict << " (informational)\n";
        std::cout << (all_ok ? "PASS" : "FAIL") << "\n";
    }
    return all_ok ? 0 : 1;
}

int cmd_chartable(const CommonOpts& opts, const std::string& group_str) {
    AbelianGroup group(parse_int_list(group_str, ','));
    long limit = global_limit(opts.limit);
    auto elements = enumerate_elements(group, limit);
    auto characters = enumerate_characters(group, limit);
    if (opts.format == "json") {
        nlohmann::json j{{"schema", 1}, {"order", group.order()}};
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& rho : characters) {
            nlohmann::json row = nlohmann::json::array();
            for (const auto& g : elements) row.push_back(value_to_json(character_value(rho, g)));
            rows.push_back(row);
        }
        j["table"] = rows;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    for (const auto& rho : characters) {
        std::string line;
        for (const auto& g : elements) {
            if (!line.empty()) line += "  ";
            line += cyc_str(character_value(rho, g));
        }
        std::cout << line << "\n";
    }
    return 0;
}

int cmd_potential(const CommonOpts& opts, const std::string& beta_max_str, long n_max,
                  long psi_max, const std::string& kind) {
    BaseTheory th = load_base(opts);
    Truncation tr{CurveClass(parse_int_list(beta_max_str, ',')), static_cast<unsigned>(n_max),
                  static_cast<unsigned>(psi_max)};
    long limit = global_limit(opts.limit);
    TruncatedPotential pot;
    if (kind == "base") {
        pot = build_base_potential(th, tr, limit);
    } else if (kind == "gerbe") {
        GerbeSpec spec = parse_gerbe(opts.gerbe);
        pot = build_gerbe_potential(spec, th, tr, limit);
    } else {
        throw ParseError("potential kind must be base or gerbe");
    }
    nlohmann::json j{{"schema", 1}, {"kind", kind}, {"terms", to_json(pot, th)}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_nodes(const CommonOpts& opts, const std::string& beta_str,
              const std::vector<std::string>& sector_strs, const std::string& rule_str) {
    GerbeSpec spec = parse_gerbe(opts.gerbe);
    CurveClass beta(parse_int_list(beta_str, ','));
    std::vector<GroupElement> g_vec;
    for (const auto& s : sector_strs) g_vec.emplace_back(spec.group(), parse_int_list(s, ','));
    DChoiceRule rule;
    if (rule_str == "last") rule = DChoiceRule::solve_last;
    else if (rule_str == "first") rule = DChoiceRule::solve_first;
    else throw ParseError("rule must be last or first");

    DCertificate cert = choose_d(spec, g_vec, beta, rule);
    auto indices = enumerate_boundary_indices(g_vec.size(), beta);

    nlohmann::json rows = nlohmann::json::array();
    for (const auto& bidx : indices) {
        auto data = node_data(spec, bidx.T, bidx.beta_prime, g_vec, beta, cert);
        nlohmann::json t = nlohmann::json::array();
        for (size_t i : bidx.T) t.push_back(i + 1);  // markings are 1-based outside
        nlohmann::json per_factor = nlohmann::json::array();
        for (const auto& nd : data)
            per_factor.push_back({{"theta", nd.theta.str()},
                                  {"r", nd.r_node},
                                  {"m", nd.m_node},
                                  {"d", nd.d_node}});
        rows.push_back({{"T", t}, {"beta_prime", bidx.beta_prime.coords()}, {"node", per_factor}});
    }
    if (opts.format == "json") {
        nlohmann::json j{{"schema", 1}, {"count", indices.size()}, {"boundary", rows}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "boundary indices: " << indices.size() << "\n";
    for (const auto& row : rows) {
        std::string line = "T={";
        bool first = true;
        for (const auto& i : row["T"]) {
            if (!first) line += ",";
            line += std::to_string(i.get<long>());
            first = false;
        }
        line += "} beta'=(";
        first = true;
        for (const auto& c : row["beta_prime"]) {
            if (!first) line += ",";
            line += std::to_string(c.get<long>());
            first = false;
        }
        line += ")";
        for (const auto& nd : row["node"])
            line += "  theta=" + nd["theta"].get<std::string>() + " r=" +
                    std::to_string(nd["r"].get<long>()) + " m=" +
                    std::to_string(nd["m"].get<long>()) + " d=" +
                    std::to_string(nd["d"].get<long>());
        std::cout << line << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact gerbe Gromov-Witten engine"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string beta_str = "0";
    std::string beta_max_str = "1";
    long n = 3, n_max = 3, psi_max = 0;
    std::vector<std::string> ins_strs, sector_strs;
    std::string group_str, kind = "base", rule_str = "last";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--base", opts.base, "built-in base theory (P1 or P2)");
        cmd->add_option("--table", opts.table, "base theory table file (overrides --base)");
        cmd->add_option("--format", opts.format, "output format: human or json");
        cmd->add_option("--limit", opts.limit, "enumeration/truncation cap");
        cmd->add_option("--tol", opts.tol, "numeric tolerance for probes");
        cmd->add_option("--seed", opts.seed, "probe seed");
    };

    CLI::App* inv = app.add_subcommand("invariant", "compute one gerbe invariant");
    add_common(inv);
    inv->add_option("--gerbe", opts.gerbe, "gerbe spec, e.g. r=2,L=1")->required();
    inv->add_option("--beta", beta_str, "curve class, comma-separated")->required();
    inv->add_option("--ins", ins_strs, "insertion g=..:class[:psi] or rho=..:class[:psi]")
        ->required();

    CLI::App* sec = app.add_subcommand("sectors", "enumerate admissible sector vectors");
    add_common(sec);
    sec->add_option("--gerbe", opts.gerbe, "gerbe spec")->required();
    sec->add_option("--beta", beta_str, "curve class")->required();
    sec->add_option("--n", n, "number of markings")->required();

    CLI::App* ver = app.add_subcommand("verify", "verify the decomposition identities");
    add_common(ver);
    ver->add_option("--gerbe", opts.gerbe, "gerbe spec")->required();
    ver->add_option("--beta-max", beta_max_str, "Novikov truncation, componentwise");
    ver->add_option("--n-max", n_max, "insertion truncation");
    ver->add_option("--psi-max", psi_max, "descendant truncation");

    CLI::App* cht = app.add_subcommand("chartable", "dump the character table");
    add_common(cht);
    cht->add_option("--group", group_str, "cyclic factors, e.g. 2,3")->required();

    CLI::App* pot = app.add_subcommand("potential", "dump a truncated potential as JSON");
    add_common(pot);
    pot->add_option("--gerbe", opts.gerbe, "gerbe spec (gerbe kind only)");
    pot->add_option("--kind", kind, "base or gerbe");
    pot->add_option("--beta-max", beta_max_str, "Novikov truncation");
    pot->add_option("--n-max", n_max, "insertion truncation");
    pot->add_option("--psi-max", psi_max, "descendant truncation");

    CLI::App* nod = app.add_subcommand("nodes", "dump the boundary index set with node data");
    add_common(nod);
    nod->add_option("--gerbe", opts.gerbe, "gerbe spec")->required();
    nod->add_option("--beta", beta_str, "curve class")->required();
    nod->add_option("--sector", sector_strs, "one residue tuple per marking")->required();
    nod->add_option("--rule", rule_str, "d-certificate rule: last or first");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (inv->parsed()) return cmd_invariant(opts, beta_str, ins_strs);
        if (sec->parsed()) return cmd_sectors(opts, beta_str, n);
        if (ver->parsed()) return cmd_verify(opts, beta_max_str, n_max, psi_max);
        if (cht->parsed()) return cmd_chartable(opts, group_str);
        if (pot->parsed()) return cmd_potential(opts, beta_max_str, n_max, psi_max, kind);
        if (nod->parsed()) return cmd_nodes(opts, beta_str, sector_strs, rule_str);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const LimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 5;
    }
    return 0;
}
