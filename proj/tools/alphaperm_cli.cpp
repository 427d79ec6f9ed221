// SPDX-License-Identifier: Apache-2.0
//! \file tools/alphaperm_cli.cpp
//! Command-line front end: perm, tq, series-check, chain-info, soup-sample,
//! soup-verify, cascade-verify.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "alphaperm/cascade.hpp"
#include "alphaperm/chain.hpp"
#include "alphaperm/compare.hpp"
#include "alphaperm/laws.hpp"
#include "alphaperm/loop.hpp"
#include "alphaperm/permanent.hpp"
#include "alphaperm/series.hpp"
#include "alphaperm/soup.hpp"
#include "json_io.hpp"

using namespace alphaperm;
using io::Json;

namespace
{

enum ExitCode : int
{
    exit_ok = 0,
    exit_internal = 1,
    exit_usage = 2,
    exit_domain = 3,
    exit_verify = 4,
};

struct usage_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct RunConfig
{
    std::string command;
    std::string matrix;
    std::string alpha;
    std::vector<unsigned> q;
    std::vector<unsigned> cap;
    std::vector<unsigned> qcap;
    std::optional<std::uint64_t> seed;
    bool seed_generated = false;
    std::uint64_t samples = 100000;
    unsigned workers = 1;
    std::string out;
    std::string csv;
    bool force_brute = false;
    std::size_t brute_cap = default_brute_cap;
    std::size_t max_order = 0;
    std::optional<std::size_t> root;
};

struct AlphaInput
{
    bool exact = true;
    Rational rational;
    double value = 0;
};

AlphaInput parse_alpha(std::string const& text, bool float_matrix)
{
    AlphaInput a;
    a.exact = text.find_first_of(".eE") == std::string::npos;
    try
    {
        if (a.exact)
            a.rational = parse_rational(text);
        else
            a.rational = rational_from_double(std::stod(text));
    }
    catch (std::exception const&)
    {
        throw usage_error("cannot parse alpha '" + text + "'");
    }
    a.value = a.rational.get_d();
    if (a.exact && float_matrix)
        throw usage_error("rational alpha cannot be combined with a float-mode matrix; "
                          "give alpha as a decimal");
    return a;
}

Json config_json(RunConfig const& c)
{
    Json j{{"command", c.command}, {"matrix", c.matrix}};
    if (!c.alpha.empty())
        j["alpha"] = c.alpha;
    if (!c.q.empty())
        j["q"] = c.q;
    if (!c.cap.empty())
        j["cap"] = c.cap;
    if (!c.qcap.empty())
        j["qcap"] = c.qcap;
    bool const stochastic = c.command == "soup-sample" || c.command == "soup-verify"
                            || c.command == "cascade-verify";
    if (stochastic)
    {
        j["seed"] = c.seed.value_or(0);
        j["seed_generated"] = c.seed_generated;
        j["samples"] = c.samples;
        j["workers"] = c.workers;
    }
    if (c.command != "chain-info" && c.command != "tq" && c.command != "soup-sample")
        j["brute_cap"] = c.brute_cap;
    if (c.max_order)
        j["max_order"] = c.max_order;
    if (c.command == "perm")
        j["force_brute"] = c.force_brute;
    if (c.root)
        j["root"] = *c.root;
    if (!c.out.empty())
        j["out"] = c.out;
    if (!c.csv.empty())
        j["csv"] = c.csv;
    return j;
}

Json envelope(RunConfig const& c)
{
    return Json{{"schema_version", io::schema_version}, {"config", config_json(c)}};
}

void write_text(std::string const& path, std::string const& text)
{
    if (path.empty())
    {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw domain_error("cannot write " + path);
    out << text;
}

std::vector<std::string> labels_of(io::MatrixInput const& m)
{
    return m.labels.empty() ? default_labels(m.exact.dim()) : m.labels;
}

BlockSpec resolve_q(RunConfig const& c, std::size_t d)
{
    if (c.q.empty())
        return BlockSpec(d, 1);
    if (c.q.size() != d)
        throw domain_error("--q has " + std::to_string(c.q.size()) + " entries; matrix has "
                           + std::to_string(d) + " rows");
    return c.q;
}

BlockSpec resolve_qcap(RunConfig const& c, std::size_t d)
{
    if (c.qcap.empty())
        return BlockSpec(d, 4);
    if (c.qcap.size() != d)
        throw domain_error("--qcap length does not match matrix dimension");
    return c.qcap;
}

std::uint64_t require_seed(RunConfig& c)
{
    if (!c.seed)
    {
        std::random_device rd;
        c.seed = (std::uint64_t{rd()} << 32) | rd();
        c.seed_generated = true;
    }
    return *c.seed;
}

//---------------------------------------------------------------------------//
int cmd_perm(RunConfig& c)
{
    auto m = io::load_matrix(c.matrix);
    auto q = resolve_q(c, m.exact.dim());
    c.q = q;
    auto g = graph_of_matrix(m.exact);
    bool closed = g.is_star_forest() && !c.force_brute;

    Json out = envelope(c);
    out["graph_class"] = std::string(to_string(g.classification()));
    out["method"] = closed ? "closed-form" : "brute-force";
    AlphaPolynomial poly;
    if (closed)
    {
        Json terms = Json::array();
        for (auto const& n : tq_enumerate(g, q))
        {
            Rational w = monomial(m.exact, n);
            auto coeff = closed_form_coefficient(q, n);
            terms.push_back(Json{{"crossing", io::crossing_json(n)},
                                 {"coefficient", io::polynomial_json(coeff)},
                                 {"monomial", to_string(w)}});
            if (sgn(w) != 0)
                poly += coeff * w;
        }
        out["terms"] = terms;
    }
    else
    {
        poly = per_alpha_block(m.exact, q, c.brute_cap);
    }
    out["polynomial"] = io::polynomial_json(poly);
    if (!c.alpha.empty())
    {
        auto a = parse_alpha(c.alpha, m.float_mode);
        if (a.exact)
            out["value"] = to_string(poly.evaluate(a.rational));
        else
            out["value"] = static_cast<double>(poly.evaluate(a.value));
    }
    write_text(c.out, out.dump(2) + "\n");
    return exit_ok;
}

int cmd_tq(RunConfig& c)
{
    auto m = io::load_matrix(c.matrix);
    auto q = resolve_q(c, m.exact.dim());
    c.q = q;
    auto g = graph_of_matrix(m.exact);
    auto tq = tq_enumerate(g, q);
    Json out = envelope(c);
    out["graph_class"] = std::string(to_string(g.classification()));
    Json elems = Json::array();
    for (auto const& n : tq)
        elems.push_back(io::crossing_json(n));
    out["count"] = tq.size();
    out["elements"] = elems;
    write_text(c.out, out.dump(2) + "\n");
    return exit_ok;
}

int cmd_series_check(RunConfig& c)
{
    auto m = io::load_matrix(c.matrix);
    if (c.alpha.empty())
        throw usage_error("series-check needs --alpha");
    auto a = parse_alpha(c.alpha, m.float_mode);
    auto cap = c.cap.empty() ? std::vector<unsigned>(m.exact.dim(), 3) : c.cap;
    c.cap = cap;
    auto rep = a.exact && !m.float_mode ? macmahon_check(m.exact, a.rational, cap, c.brute_cap)
                                        : macmahon_check(m.exact, a.value, cap, c.brute_cap);
    Json out = envelope(c);
    out["mode"] = rep.exact ? "exact" : "float";
    out["max_residual"] = rep.max_residual;
    out["verdict"] = rep.pass ? "pass" : "fail";
    Json rows = Json::array();
    for (auto const& r : rep.rows)
        rows.push_back(Json{{"q", r.q},
                            {"series", r.series_coeff},
                            {"permanent", r.permanent_coeff},
                            {"residual", r.residual}});
    out["rows"] = rows;
    write_text(c.out, out.dump(2) + "\n");
    return rep.pass ? exit_ok : exit_verify;
}

template<Scalar T>
Json chain_info_json(SubMarkovChain<T> const& chain)
{
    auto value = [](T const& v) -> Json {
        if constexpr (is_exact_v<T>)
            return to_string(v);
        else
            return static_cast<double>(v);
    };
    Json j;
    j["labels"] = chain.labels();
    Json kill = Json::array();
    for (auto const& k : chain.killing())
        kill.push_back(value(k));
    j["killing"] = kill;
    j["spectral_radius"] = chain.spectral_radius();
    T det = det_I_minus_P(chain);
    j["det"] = value(det);
    j["det_value"] = scalar_traits<T>::to_double(det);
    j["total_mass"] = total_mass(chain);
    auto g = green_function(chain);
    j["green"] = io::matrix_json(g);
    Json diag = Json::array();
    for (std::size_t x = 0; x < chain.dim(); ++x)
        diag.push_back(value(g(x, x)));
    j["green_diagonal"] = diag;
    std::vector<std::size_t> ord(chain.dim());
    std::iota(ord.begin(), ord.end(), std::size_t{0});
    auto rep = det_identity_check(chain, ord);
    Json terms = Json::array();
    for (auto const& t : rep.diagonal)
        terms.push_back(value(t));
    j["det_identity"] = Json{{"terms", terms}, {"product", value(rep.product)}, {"pass", rep.pass}};
    j["graph_class"] = std::string(to_string(graph_of_matrix(chain.matrix()).classification()));
    return j;
}

int cmd_chain_info(RunConfig& c)
{
    auto m = io::load_matrix(c.matrix);
    Json out = envelope(c);
    out["mode"] = m.float_mode ? "float" : "rational";
    Json info = m.float_mode
                    ? chain_info_json(validate_chain(m.exact.cast<double>(), labels_of(m)))
                    : chain_info_json(validate_chain(m.exact, labels_of(m)));
    for (auto& [k, v] : info.items())
        out[k] = v;
    write_text(c.out, out.dump(2) + "\n");
    return info["det_identity"]["pass"].get<bool>() ? exit_ok : exit_verify;
}

//---------------------------------------------------------------------------//
SubMarkovChain<Rational> load_chain(RunConfig const& c, io::MatrixInput& m)
{
    m = io::load_matrix(c.matrix);
    return validate_chain(m.exact, labels_of(m));
}

int cmd_soup_sample(RunConfig& c)
{
    io::MatrixInput m;
    auto chain = load_chain(c, m);
    if (c.alpha.empty())
        throw usage_error("soup-sample needs --alpha");
    auto a = parse_alpha(c.alpha, m.float_mode);
    auto seed = require_seed(c);
    auto fchain = to_float_chain(chain);
    LoopSampler probe(fchain, a.value);

    std::vector<std::vector<std::string>> records(c.samples);
    run_replicas(c.samples, seed, c.workers, [&](unsigned) {
        return [&, s = LoopSampler(fchain, a.value)](Engine& rng, std::uint64_t i) mutable {
            for (auto const& l : s.sample_soup(rng))
                records[i].push_back(format_loop(l, chain.labels()));
        };
    });

    std::string text;
    Json head = envelope(c);
    head["total_mass"] = probe.total_mass();
    text += head.dump() + "\n";
    for (std::uint64_t i = 0; i < c.samples; ++i)
        text += Json{{"seed", seed}, {"replica", i}, {"loops", records[i]}}.dump() + "\n";
    write_text(c.out, text);
    return exit_ok;
}

int cmd_soup_verify(RunConfig& c)
{
    io::MatrixInput m;
    auto chain = load_chain(c, m);
    if (c.alpha.empty())
        throw usage_error("soup-verify needs --alpha");
    auto a = parse_alpha(c.alpha, m.float_mode);
    auto seed = require_seed(c);
    std::size_t const d = chain.dim();
    auto qcap = resolve_qcap(c, d);
    c.qcap = qcap;
    std::size_t max_order = c.max_order ? c.max_order : order(qcap);

    std::vector<std::pair<BlockSpec, double>> law;
    for_each_q(qcap, max_order, [&](BlockSpec const& q) {
        law.emplace_back(q, theta_law(chain, a.value, q, c.brute_cap));
    });
    auto fchain = to_float_chain(chain);
    auto counts = tally_replicas<BlockSpec>(c.samples, seed, c.workers, [&](unsigned) {
        return [s = LoopSampler(fchain, a.value), d](Engine& rng) mutable {
            auto loops = s.sample_soup(rng);
            return occupation_fields(loops, d).theta;
        };
    });
    auto rep = empirical_compare<BlockSpec>(counts, c.samples, law, io::format_vector);

    Json out = envelope(c);
    out["law"] = "theta";
    out["report"] = io::law_report_json(rep);
    write_text(c.out, out.dump(2) + "\n");
    if (!c.csv.empty())
        write_text(c.csv, io::law_report_csv(rep));
    return rep.pass ? exit_ok : exit_verify;
}

int cmd_cascade_verify(RunConfig& c)
{
    io::MatrixInput m;
    auto chain = load_chain(c, m);
    if (c.alpha.empty())
        throw usage_error("cascade-verify needs --alpha");
    auto a = parse_alpha(c.alpha, m.float_mode);
    auto seed = require_seed(c);
    std::size_t const d = chain.dim();
    auto qcap = resolve_qcap(c, d);
    c.qcap = qcap;
    std::size_t max_order = c.max_order ? c.max_order : order(qcap);
    auto g = graph_of_matrix(chain.matrix());
    if (!g.is_star_forest())
        throw structure_error("cascade-verify requires a *-forest chain");

    std::vector<std::pair<CrossingMatrix, double>> law;
    Json exact = Json::array();
    bool exact_pass = true;
    for_each_q(qcap, max_order, [&](BlockSpec const& q) {
        AlphaPolynomial sum;
        for (auto const& n : tq_enumerate(g, q))
        {
            law.emplace_back(n, n_law_starforest(chain, a.value, n));
            sum += n_law_starforest_weight(chain, n);
        }
        if (a.exact && order(q) <= c.brute_cap)
        {
            auto theta = per_alpha_block(chain.matrix(), q, c.brute_cap)
                         * (1 / factorial_product(q));
            bool ok = sum.evaluate(a.rational) == theta.evaluate(a.rational);
            exact_pass = exact_pass && ok;
            exact.push_back(Json{{"q", q}, {"n_law_sum", to_string(sum.evaluate(a.rational))},
                                 {"theta_law", to_string(theta.evaluate(a.rational))},
                                 {"pass", ok}});
        }
    });

    ForestCascade cascade(chain, a.value, c.root);
    auto cascade_counts = tally_replicas<CrossingMatrix>(c.samples, seed, c.workers, [&](unsigned) {
        return [&cascade](Engine& rng) { return cascade.sample(rng).crossings; };
    });
    auto fchain = to_float_chain(chain);
    std::uint64_t const soup_seed = seed ^ 0x9e3779b97f4a7c15ULL;
    auto soup_counts = tally_replicas<CrossingMatrix>(c.samples, soup_seed, c.workers, [&](unsigned) {
        return [s = LoopSampler(fchain, a.value), d](Engine& rng) mutable {
            auto loops = s.sample_soup(rng);
            return occupation_fields(loops, d).crossings;
        };
    });
    auto crep = empirical_compare<CrossingMatrix>(cascade_counts, c.samples, law, io::format_crossing);
    auto srep = empirical_compare<CrossingMatrix>(soup_counts, c.samples, law, io::format_crossing);

    Json out = envelope(c);
    out["soup_seed"] = soup_seed;
    out["law"] = "crossings";
    out["cascade"] = io::law_report_json(crep);
    out["soup"] = io::law_report_json(srep);
    out["exact_sum_check"] = Json{{"evaluated", a.exact}, {"pass", exact_pass}, {"rows", exact}};
    bool pass = crep.pass && srep.pass && exact_pass;
    out["verdict"] = pass ? "pass" : "fail";
    write_text(c.out, out.dump(2) + "\n");
    if (!c.csv.empty())
        write_text(c.csv, io::law_report_csv(crep));
    return pass ? exit_ok : exit_verify;
}

} // namespace

//---------------------------------------------------------------------------//
int main(int argc, char** argv)
{
    CLI::App app{"alpha-permanents, MacMahon series and Markov loop soups"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_matrix = [&](CLI::App* s) {
        s->add_option("--matrix", cfg.matrix, "matrix or chain JSON file")->required();
    };
    auto add_out = [&](CLI::App* s) {
        s->add_option("--out", cfg.out, "write JSON here instead of stdout");
    };
    auto add_sampling = [&](CLI::App* s) {
        s->add_option("--alpha", cfg.alpha, "alpha > 0 (rational string or decimal)");
        s->add_option("--seed", cfg.seed, "64-bit seed (generated and recorded when absent)");
        s->add_option("--samples", cfg.samples, "number of replicas")->check(CLI::PositiveNumber);
        s->add_option("--workers", cfg.workers, "sampling threads")->check(CLI::PositiveNumber);
    };

    auto* perm = app.add_subcommand("perm", "alpha-permanent of the block matrix A[q]");
    add_matrix(perm);
    perm->add_option("--q", cfg.q, "block sizes, e.g. 1,2,1 (default all ones)")->delimiter(',');
    perm->add_option("--alpha", cfg.alpha, "evaluate at this alpha");
    perm->add_flag("--force-brute", cfg.force_brute, "skip the *-forest closed form");
    perm->add_option("--cap", cfg.brute_cap, "brute-force order limit");
    add_out(perm);

    auto* tq = app.add_subcommand("tq", "enumerate T_q on a *-forest");
    add_matrix(tq);
    tq->add_option("--q", cfg.q, "block sizes")->delimiter(',');
    add_out(tq);

    auto* series = app.add_subcommand("series-check", "MacMahon identity up to a box cap");
    add_matrix(series);
    series->add_option("--alpha", cfg.alpha, "rational string (exact) or decimal (float)");
    series->add_option("--cap", cfg.cap, "per-variable degree cap, e.g. 3,3,3")->delimiter(',');
    series->add_option("--brute-cap", cfg.brute_cap, "brute-force order limit");
    add_out(series);

    auto* info = app.add_subcommand("chain-info", "Green function, determinant, loop mass");
    add_matrix(info);
    add_out(info);

    auto* sample = app.add_subcommand("soup-sample", "sample loop soups as NDJSON");
    add_matrix(sample);
    add_sampling(sample);
    add_out(sample);

    auto* verify = app.add_subcommand("soup-verify", "soup occupation field against theta law");
    add_matrix(verify);
    add_sampling(verify);
    verify->add_option("--qcap", cfg.qcap, "per-vertex outcome cap (default 4 each)")->delimiter(',');
    verify->add_option("--max-order", cfg.max_order, "cap on |q| (default: none)");
    verify->add_option("--cap", cfg.brute_cap, "brute-force order limit");
    verify->add_option("--csv", cfg.csv, "also write outcome,theory,empirical CSV");
    add_out(verify);

    auto* cascade = app.add_subcommand("cascade-verify", "cascade and soup against crossing law");
    add_matrix(cascade);
    add_sampling(cascade);
    cascade->add_option("--qcap", cfg.qcap, "per-vertex outcome cap (default 4 each)")->delimiter(',');
    cascade->add_option("--max-order", cfg.max_order, "cap on |q| (default: none)");
    cascade->add_option("--cap", cfg.brute_cap, "brute-force order limit for the exact check");
    cascade->add_option("--root", cfg.root, "root vertex index (0-based) of its component");
    cascade->add_option("--csv", cfg.csv, "also write the cascade CSV");
    add_out(cascade);

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (*perm)
            return (cfg.command = "perm", cmd_perm(cfg));
        if (*tq)
            return (cfg.command = "tq", cmd_tq(cfg));
        if (*series)
            return (cfg.command = "series-check", cmd_series_check(cfg));
        if (*info)
            return (cfg.command = "chain-info", cmd_chain_info(cfg));
        if (*sample)
            return (cfg.command = "soup-sample", cmd_soup_sample(cfg));
        if (*verify)
            return (cfg.command = "soup-verify", cmd_soup_verify(cfg));
        if (*cascade)
            return (cfg.command = "cascade-verify", cmd_cascade_verify(cfg));
    }
    catch (usage_error const& e)
    {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    }
    catch (internal_error const& e)
    {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
    catch (error const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_domain;
    }
    catch (nlohmann::json::exception const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_domain;
    }
    return exit_usage;
}
