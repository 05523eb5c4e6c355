#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pfre/pfre.hpp"

using json = nlohmann::json;
using namespace pfre;

namespace {

// exit 1
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// exit 2
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    return out;
}

struct Space {
    bool graph = false;
    Norm norm = Norm::l2;
};

Space parse_space(const std::string& s) {
    if (s == "graph") return {true, Norm::l2};
    if (s == "euclid:p1") return {false, Norm::l1};
    if (s == "euclid:p2" || s == "euclid") return {false, Norm::l2};
    if (s == "euclid:pinf") return {false, Norm::linf};
    throw ContractError("unknown space '" + s + "'");
}

CurveFile load_curve(const std::string& path) {
    auto in = open_in(path);
    return read_curve(in, path);
}

std::shared_ptr<const WeightedGraph> load_graph(const std::string& path) {
    if (path.empty()) throw ContractError("graph space needs --graph");
    auto in = open_in(path);
    return std::make_shared<const WeightedGraph>(read_graph(in, path));
}

Bundle load_bundle_file(const std::string& path) {
    auto in = open_in(path);
    return load_bundle(in);
}

void save_bundle_file(const std::string& path, const Bundle& b) {
    // write then rename so a failed write never clobbers the old bundle
    std::string tmp = path + ".tmp";
    {
        auto out = open_out(tmp);
        save_bundle(out, b);
        out.flush();
        if (!out) throw IoError("failed writing " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw IoError("cannot replace " + path);
}

void emit(const json& j) { std::cout << j.dump() << '\n'; }

// ---- generate

struct GenerateOpts {
    std::string kind = "line";
    std::size_t n = 10, dim = 2, reps = 2, vertices = 64, extra = 64;
    std::uint64_t seed = 1;
    bool lattice = false, integer_weights = false;
    std::string out, graph, graph_out;
};

int cmd_generate(const GenerateOpts& o) {
    if (o.out.empty()) throw ContractError("--out is required");
    json rec{{"command", "generate"}, {"kind", o.kind}, {"out", o.out}};
    if (o.kind == "graph_walk") {
        std::shared_ptr<const WeightedGraph> g;
        if (!o.graph.empty()) {
            g = load_graph(o.graph);
        } else {
            if (o.graph_out.empty()) throw ContractError("graph_walk needs --graph or --graph-out");
            g = std::make_shared<const WeightedGraph>(
                gen::random_graph(o.vertices, o.extra, o.seed, o.integer_weights));
            auto gout = open_out(o.graph_out);
            write_graph(gout, *g);
            rec["graph_out"] = o.graph_out;
        }
        auto walk = gen::graph_walk(*g, o.n, o.seed ^ 0x9e3779b97f4a7c15ULL);
        auto out = open_out(o.out);
        write_curve(out, walk);
        rec["n"] = walk.size();
    } else {
        std::vector<EuclideanPoint> pts;
        if (o.kind == "line")
            pts = gen::line(o.n, o.dim);
        else if (o.kind == "spiral")
            pts = gen::spiral(o.n, o.dim);
        else if (o.kind == "retrace")
            pts = gen::retrace(o.n, o.reps, o.dim);
        else if (o.kind == "random_walk")
            pts = gen::random_walk(o.n, o.dim, o.seed, o.lattice);
        else
            throw ContractError("unknown kind '" + o.kind + "'");
        auto out = open_out(o.out);
        write_curve(out, pts);
        rec["n"] = pts.size();
        rec["dim"] = o.dim;
        if (o.kind == "line") rec["c_upper"] = 2.0;
        if (o.kind == "retrace") rec["c_exact"] = 2.0 * static_cast<double>(o.reps);
    }
    emit(rec);
    return 0;
}

// ---- preprocess

struct PreprocessOpts {
    std::string curve, space = "euclid:p2", graph, out;
    bool no_2d = false, estimate_c = false;
};

int cmd_preprocess(const PreprocessOpts& o) {
    if (o.out.empty()) throw ContractError("--out is required");
    Space sp = parse_space(o.space);
    auto f = load_curve(o.curve);
    if (f.graph != sp.graph)
        throw ContractError(f.graph ? "graph curve needs --space graph" : "Euclidean curve given for graph space");
    auto t0 = Clock::now();
    Bundle b;
    json rec{{"command", "preprocess"}, {"n", f.size()}, {"space", o.space}};
    if (sp.graph) {
        auto idx = make_index(f.vertices, graph_oracle(load_graph(o.graph)));
        b = make_bundle(idx, !o.no_2d);
    } else {
        EuclideanOracle oracle(f.dimension, sp.norm);
        auto idx = make_index(f.coords, oracle);
        b = make_bundle(idx, !o.no_2d);
        if (o.estimate_c && idx.size() >= 2) b.c_estimate = estimate_packedness(idx.curve(), oracle).c_lower;
    }
    rec["build_ms"] = ms_since(t0);
    rec["tadd_size"] = b.tadd.size();
    if (b.tadd_2d) rec["tadd_2d_size"] = b.tadd_2d->size();
    if (b.c_estimate >= 0) rec["c_estimate"] = b.c_estimate;
    save_bundle_file(o.out, b);
    rec["out"] = o.out;
    emit(rec);
    return 0;
}

// ---- query

struct QueryOpts {
    std::string bundle, q, mode = "value";
    double epsilon = 0.5;
    std::optional<double> rho, alpha, c;
    std::vector<std::size_t> sub;
    std::uint64_t seed = 1;
};

template <class Oracle>
json run_query(const CurveIndex<Oracle>& idx, const Curve<typename Oracle::point_type>& Q, const QueryOpts& o) {
    QueryParams p;
    p.epsilon = o.epsilon;
    p.rho = o.rho.value_or(0.0);
    if (!o.sub.empty()) {
        p.i = o.sub[0];
        p.j = o.sub[1];
    }
    auto [i, j] = p.range(idx.size());
    json rec{{"mode", o.mode}, {"epsilon", o.epsilon}, {"i", i}, {"j", j}, {"n", idx.size()}, {"m", Q.size()}};
    const double alpha = o.alpha.value_or(0.0);
    if (alpha < 0.0 || alpha >= 1.0) throw ContractError("--alpha must lie in [0, 1)");
    bool hausdorff = o.mode.rfind("hausdorff", 0) == 0;
    if (hausdorff && alpha > 0.0) throw ContractError("Hausdorff queries need an exact oracle (--alpha 0)");
    if (alpha > 0.0) rec["alpha"] = alpha;
    bool needs_rho = o.mode == "decide" || o.mode == "hausdorff-decide";
    if (needs_rho && !o.rho) throw ContractError("--rho is required for " + o.mode);

    auto t0 = Clock::now();
    auto with_oracle = [&](auto&& f) {
        if (alpha > 0.0) return f(perturbed_oracle(idx.oracle(), alpha, o.seed));
        return f(idx.oracle());
    };
    if (o.mode == "decide") {
        auto out = with_oracle([&](const auto& qo) { return decide(idx, Q, p, qo); });
        rec["rho"] = p.rho;
        rec["verdict"] = to_string(out.verdict);
        rec["cells_pushed"] = out.cells_pushed;
        rec["oracle_calls"] = out.oracle_calls;
        rec["simplified_vertices"] = out.simplified_vertices;
    } else if (o.mode == "value") {
        auto out = with_oracle([&](const auto& qo) { return value(idx, Q, p, qo); });
        rec["value"] = out.nu;
        rec["lambda"] = out.lambda;
        rec["case"] = to_string(out.search_case);
        rec["cells_pushed"] = out.cells_pushed;
        rec["search_cells_pushed"] = out.search_cells_pushed;
        rec["decide_calls"] = out.decide_calls;
        rec["oracle_calls"] = out.oracle_calls;
    } else if (o.mode == "hausdorff-decide") {
        double c = o.c.value_or(std::numeric_limits<double>::infinity());
        auto out = hausdorff_decide(idx, Q, p.epsilon, p.rho, p.i, p.j, c);
        rec["rho"] = p.rho;
        rec["verdict"] = to_string(out.verdict);
        rec["early_exit"] = out.early_exit;
        rec["cells_pushed"] = out.zeroes;
        rec["stack_pushes"] = out.stack_pushes;
        rec["oracle_calls"] = out.oracle_calls;
    } else if (o.mode == "hausdorff-value") {
        auto out = hausdorff_value(idx, Q, p.epsilon, p.i, p.j);
        rec["value"] = out.nu;
        rec["lambda"] = out.lambda;
        rec["cells_pushed"] = out.total_zeroes;
        rec["decide_calls"] = out.decide_calls;
        rec["oracle_calls"] = out.oracle_calls;
    } else {
        throw ContractError("unknown mode '" + o.mode + "'");
    }
    rec["wall_ms"] = ms_since(t0);
    return rec;
}

void check_query_opts(const QueryOpts& o) {
    if (!(o.epsilon > 0.0 && o.epsilon < 1.0)) throw ContractError("--epsilon must lie in (0, 1)");
    if (o.rho && !(*o.rho >= 0.0)) throw ContractError("--rho must be non-negative");
}

int cmd_query(const QueryOpts& o) {
    check_query_opts(o);
    Bundle b = load_bundle_file(o.bundle);
    auto f = load_curve(o.q);
    if (b.space == SpaceKind::graph) {
        if (!f.graph) throw ContractError("graph bundle needs a gcurve query");
        auto idx = graph_index(b);
        emit(run_query(idx, build_curve(f.vertices, idx.oracle()), o));
    } else {
        if (f.graph) throw ContractError("Euclidean bundle needs a curve query");
        if (f.dimension != b.dimension) throw ContractError("query dimension differs from the bundle");
        auto idx = euclidean_index(b);
        emit(run_query(idx, build_curve(f.coords, idx.oracle()), o));
    }
    return 0;
}

// ---- exact

struct ExactOpts {
    std::string p, q, mode = "frechet", space = "euclid:p2", graph;
    std::size_t budget = default_exact_budget;
};

int cmd_exact(const ExactOpts& o) {
    Space sp = parse_space(o.space);
    auto fp = load_curve(o.p), fq = load_curve(o.q);
    if (fp.graph != sp.graph || fq.graph != sp.graph) throw ContractError("curve kind does not match --space");
    if (o.mode != "frechet" && o.mode != "hausdorff") throw ContractError("unknown mode '" + o.mode + "'");
    auto t0 = Clock::now();
    double v;
    auto run = [&](const auto& P, const auto& Q, const auto& oracle) {
        return o.mode == "frechet" ? exact_discrete_frechet(P, Q, oracle, o.budget)
                                   : exact_hausdorff(P, Q, oracle, o.budget);
    };
    if (sp.graph) {
        auto oracle = graph_oracle(load_graph(o.graph));
        v = run(build_curve(fp.vertices, oracle), build_curve(fq.vertices, oracle), oracle);
    } else {
        if (fp.dimension != fq.dimension) throw ContractError("curves differ in dimension");
        EuclideanOracle oracle(fp.dimension, sp.norm);
        v = run(build_curve(fp.coords, oracle), build_curve(fq.coords, oracle), oracle);
    }
    emit({{"command", "exact"}, {"mode", o.mode}, {"value", v}, {"n", fp.size()}, {"m", fq.size()},
          {"wall_ms", ms_since(t0)}});
    return 0;
}

// ---- update

struct UpdateOpts {
    std::string bundle, op, out;
    std::vector<double> point;
    std::optional<double> edge;
};

template <class Oracle>
Bundle apply_update(CurveIndex<Oracle> idx, const UpdateOpts& o, bool with_2d,
                    typename Oracle::point_type p) {
    End end = o.op.ends_with("head") ? End::head : End::tail;
    if (o.op.starts_with("extend")) {
        if (o.edge && !(*o.edge >= 0.0)) throw ContractError("--edge must be non-negative");
        idx.extend(end, std::move(p), o.edge);
    } else {
        idx.truncate(end);
    }
    return make_bundle(idx, with_2d);
}

int cmd_update(const UpdateOpts& o) {
    static const std::vector<std::string> ops{"extend-head", "extend-tail", "truncate-head", "truncate-tail"};
    if (std::find(ops.begin(), ops.end(), o.op) == ops.end()) throw ContractError("unknown op '" + o.op + "'");
    bool extend = o.op.starts_with("extend");
    if (extend && o.point.empty()) throw ContractError(o.op + " needs --point");
    if (!extend && (!o.point.empty() || o.edge)) throw ContractError(o.op + " takes no point");
    Bundle b = load_bundle_file(o.bundle);
    bool with_2d = b.tadd_2d.has_value();
    Bundle next;
    if (b.space == SpaceKind::graph) {
        GraphVertex v = 0;
        if (extend) {
            if (o.point.size() != 1 || o.point[0] < 0 || o.point[0] != std::floor(o.point[0]) ||
                o.point[0] >= static_cast<double>(b.graph->vertex_count()))
                throw ContractError("--point must be one vertex id of the graph");
            v = static_cast<GraphVertex>(o.point[0]);
        }
        next = apply_update(graph_index(b), o, with_2d, v);
    } else {
        if (extend && o.point.size() != b.dimension) throw ContractError("--point has the wrong dimension");
        next = apply_update(euclidean_index(b), o, with_2d, EuclideanPoint(o.point.begin(), o.point.end()));
    }
    std::string dest = o.out.empty() ? o.bundle : o.out;
    save_bundle_file(dest, next);
    emit({{"command", "update"}, {"op", o.op}, {"n", next.size()}, {"out", dest}});
    return 0;
}

// ---- bench

struct BenchOpts {
    std::string bundle, q, out;
    std::string epsilons = "0.5", modes = "decide";
    double rho = 1.0;
    std::size_t reps = 5;
};

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

template <class Oracle>
void bench_rows(const CurveIndex<Oracle>& idx, const Curve<typename Oracle::point_type>& Q, const BenchOpts& o,
                const std::vector<double>& eps_list, const std::vector<std::string>& modes, std::ostream& csv) {
    for (double eps : eps_list)
        for (const auto& mode : modes) {
            QueryOpts qo;
            qo.mode = mode;
            qo.epsilon = eps;
            qo.rho = o.rho;
            check_query_opts(qo);
            std::vector<double> ns;
            json last;
            for (std::size_t r = 0; r < o.reps; ++r) {
                auto t0 = Clock::now();
                last = run_query(idx, Q, qo);
                ns.push_back(std::chrono::duration<double, std::nano>(Clock::now() - t0).count());
            }
            std::sort(ns.begin(), ns.end());
            double med = ns.size() % 2 ? ns[ns.size() / 2] : 0.5 * (ns[ns.size() / 2 - 1] + ns[ns.size() / 2]);
            csv << idx.size() << ',' << Q.size() << ',' << eps << ',' << mode << ','
                << last["cells_pushed"].template get<std::size_t>() << ','
                << last["oracle_calls"].template get<std::size_t>() << ',' << static_cast<long long>(med) << '\n';
        }
}

int cmd_bench(const BenchOpts& o) {
    if (o.reps == 0) throw ContractError("--reps must be positive");
    std::vector<double> eps_list;
    for (const auto& t : split(o.epsilons)) {
        try {
            eps_list.push_back(std::stod(t));
        } catch (const std::exception&) {
            throw ContractError("bad epsilon '" + t + "'");
        }
    }
    auto modes = split(o.modes);
    std::ostringstream csv;
    csv << "n,m,epsilon,mode,cells_pushed,oracle_calls,wall_ns_median\n";
    if (!eps_list.empty() && !modes.empty()) {
        Bundle b = load_bundle_file(o.bundle);
        auto f = load_curve(o.q);
        if (b.space == SpaceKind::graph) {
            if (!f.graph) throw ContractError("graph bundle needs a gcurve query");
            auto idx = graph_index(b);
            bench_rows(idx, build_curve(f.vertices, idx.oracle()), o, eps_list, modes, csv);
        } else {
            if (f.graph || f.dimension != b.dimension) throw ContractError("query does not match the bundle");
            auto idx = euclidean_index(b);
            bench_rows(idx, build_curve(f.coords, idx.oracle()), o, eps_list, modes, csv);
        }
    }
    if (o.out.empty()) {
        std::cout << csv.str();
    } else {
        auto out = open_out(o.out);
        out << csv.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Approximate Frechet and Hausdorff queries against a preprocessed curve"};
    app.require_subcommand(1);

    GenerateOpts g;
    auto* gen = app.add_subcommand("generate", "write a synthetic curve");
    gen->add_option("--kind", g.kind, "line, spiral, retrace, random_walk or graph_walk");
    gen->add_option("--n", g.n, "vertices");
    gen->add_option("--dim", g.dim, "dimension");
    gen->add_option("--reps", g.reps, "traversals for retrace");
    gen->add_option("--seed", g.seed);
    gen->add_flag("--lattice", g.lattice, "unit lattice steps for random_walk");
    gen->add_option("--graph", g.graph, "existing graph for graph_walk");
    gen->add_option("--graph-out", g.graph_out, "write a fresh random graph here");
    gen->add_option("--vertices", g.vertices, "vertices of the random graph");
    gen->add_option("--extra", g.extra, "extra edges beyond the spanning tree");
    gen->add_flag("--integer-weights", g.integer_weights);
    gen->add_option("--out", g.out)->required();

    PreprocessOpts pp;
    auto* pre = app.add_subcommand("preprocess", "build a bundle for a curve");
    pre->add_option("curve", pp.curve)->required();
    pre->add_option("--space", pp.space, "euclid:p1, euclid:p2, euclid:pinf or graph");
    pre->add_option("--graph", pp.graph);
    pre->add_flag("--no-2d", pp.no_2d, "skip the 2-D TADD (no Hausdorff value)");
    pre->add_flag("--estimate-c", pp.estimate_c, "store a packedness lower bound (cubic time)");
    pre->add_option("--out", pp.out)->required();

    QueryOpts qo;
    auto* qry = app.add_subcommand("query", "answer one query against a bundle");
    qry->add_option("bundle", qo.bundle)->required();
    qry->add_option("q", qo.q)->required();
    qry->add_option("--mode", qo.mode, "decide, value, hausdorff-decide or hausdorff-value");
    qry->add_option("--epsilon", qo.epsilon);
    qry->add_option("--rho", qo.rho, "threshold; rho* for hausdorff-decide");
    qry->add_option("--sub", qo.sub, "subcurve i j (1-based)")->expected(2);
    qry->add_option("--alpha", qo.alpha, "perturb the query oracle by this slack");
    qry->add_option("--seed", qo.seed, "perturbation seed");
    qry->add_option("--c", qo.c, "packedness constant for the Hausdorff early exit");

    ExactOpts eo;
    auto* ex = app.add_subcommand("exact", "exact distance by brute force");
    ex->add_option("p", eo.p)->required();
    ex->add_option("q", eo.q)->required();
    ex->add_option("--mode", eo.mode, "frechet or hausdorff");
    ex->add_option("--space", eo.space);
    ex->add_option("--graph", eo.graph);
    ex->add_option("--budget", eo.budget, "maximum n*m");

    UpdateOpts uo;
    auto* up = app.add_subcommand("update", "extend or truncate a bundle's curve");
    up->add_option("bundle", uo.bundle)->required();
    up->add_option("--op", uo.op, "extend-head, extend-tail, truncate-head or truncate-tail")->required();
    up->add_option("--point", uo.point, "coordinates, or a vertex id");
    up->add_option("--edge", uo.edge, "edge length (defaults to the oracle)");
    up->add_option("--out", uo.out, "write here instead of in place");

    BenchOpts bo;
    auto* be = app.add_subcommand("bench", "time queries, CSV on stdout");
    be->add_option("bundle", bo.bundle);
    be->add_option("q", bo.q);
    be->add_option("--epsilon", bo.epsilons, "comma separated sweep");
    be->add_option("--modes", bo.modes, "comma separated modes");
    be->add_option("--rho", bo.rho);
    be->add_option("--reps", bo.reps);
    be->add_option("--out", bo.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*gen) return cmd_generate(g);
        if (*pre) return cmd_preprocess(pp);
        if (*qry) return cmd_query(qo);
        if (*ex) return cmd_exact(eo);
        if (*up) return cmd_update(uo);
        if (*be) return cmd_bench(bo);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const BundleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        // contract violations: bad parameters, ranges, budgets, unreachable vertices
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
