#include "hb/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

namespace hb {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw std::invalid_argument("config error at " + path + ": " + what);
}

const json& field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) bad(path + "." + key, "missing required field");
    return j.at(key);
}

double num(const json& v, const std::string& path) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try { return parse_real(v.get<std::string>()); }
        catch (const std::exception& e) { bad(path, e.what()); }
    }
    bad(path, "expected a number (or \"inf\")");
}

double num_or(const json& j, const std::string& key, double dflt, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) return dflt;
    return num(j.at(key), path + "." + key);
}

std::string str(const json& v, const std::string& path) {
    if (!v.is_string()) bad(path, "expected a string");
    return v.get<std::string>();
}

}  // namespace

json jreal(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

double jreal_parse(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_real(v.get<std::string>());
    if (v.is_null()) return kNaN;
    throw std::invalid_argument("expected real-valued JSON entry");
}

WeightSpec parse_weight(const json& j, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object with \"pieces\"");
    const json& jp = field(j, "pieces", path);
    if (!jp.is_array() || jp.empty()) bad(path + ".pieces", "expected a nonempty array");
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i < jp.size(); ++i) {
        const std::string pp = path + ".pieces[" + std::to_string(i) + "]";
        const json& e = jp.at(i);
        Piece piece;
        piece.lo = num(field(e, "from", pp), pp + ".from");
        piece.hi = num(field(e, "to", pp), pp + ".to");
        const std::string form = str(field(e, "form", pp), pp + ".form");
        if (form == "power") {
            const double c = num(field(e, "coeff", pp), pp + ".coeff");
            const double ex = num_or(e, "exponent", 0.0, pp);
            if (c < 0) bad(pp + ".coeff", "power coefficient must be nonnegative");
            piece.terms.push_back({c, ex, 0.0, Term::Exp::none});
        } else if (form == "exp_decay") {
            const double c = num(field(e, "coeff", pp), pp + ".coeff");
            const double rate = num(field(e, "rate", pp), pp + ".rate");
            if (!(c >= 0) || !(rate > 0)) bad(pp, "exp_decay needs coeff >= 0 and rate > 0");
            piece.terms.push_back({c, 0.0, rate, Term::Exp::decay});
        } else if (form == "affine") {
            const double c0 = num(field(e, "c0", pp), pp + ".c0");
            const double c1 = num(field(e, "c1", pp), pp + ".c1");
            piece.terms.push_back({c0, 0.0, 0.0, Term::Exp::none});
            piece.terms.push_back({c1, 1.0, 0.0, Term::Exp::none});
        } else {
            bad(pp + ".form", "unknown piece form '" + form + "' (power|exp_decay|affine)");
        }
        pieces.push_back(std::move(piece));
    }
    const double scale = num_or(j, "scale", 1.0, path);
    try {
        return WeightSpec(std::move(pieces), scale);
    } catch (const std::exception& e) {
        bad(path, e.what());
    }
}

Kernel parse_kernel(const json& j, const std::string& path) {
    const std::string fam = str(field(j, "family", path), path + ".family");
    Kernel k = Kernel::constant();
    try {
        if (fam == "constant") {
            k = Kernel::constant();
        } else if (fam == "riemann_liouville") {
            k = Kernel::riemann_liouville(num(field(j, "alpha", path), path + ".alpha"));
        } else if (fam == "logarithmic") {
            k = Kernel::logarithmic(num(field(j, "alpha", path), path + ".alpha"));
        } else if (fam == "integral_of") {
            k = Kernel::integral_of(parse_weight(field(j, "u", path), path + ".u"));
        } else if (fam == "sup_of") {
            k = Kernel::sup_of(parse_weight(field(j, "u", path), path + ".u"));
        } else if (fam == "custom_tabulated") {
            auto nums = [&](const char* key) {
                const json& a = field(j, key, path);
                if (!a.is_array()) bad(path + "." + key, "expected an array");
                std::vector<double> out;
                for (std::size_t i = 0; i < a.size(); ++i)
                    out.push_back(num(a.at(i), path + "." + key + "[" + std::to_string(i) + "]"));
                return out;
            };
            const double theta = num_or(j, "theta", 1.0, path);
            k = Kernel::tabulated(nums("xs"), nums("ys"), nums("values"), theta);
            const auto rep = k.check_regularity(1e-3, 1e3, 400, 2024);
            if (!rep.ok())
                bad(path, "tabulated kernel fails the regularity check (worst violation " +
                              fmt17(rep.worst_violation) + ")");
        } else {
            bad(path + ".family", "unknown kernel family '" + fam + "'");
        }
    } catch (const std::invalid_argument& e) {
        if (std::string(e.what()).rfind("config error", 0) == 0) throw;
        bad(path, e.what());
    }
    if (j.contains("theta")) k = k.with_theta(num(j.at("theta"), path + ".theta"));
    return k;
}

ExperimentConfig parse_config(const json& j, const std::string& origin) {
    if (!j.is_object()) bad(origin, "top level must be an object");
    const json& jp = field(j, "problem", origin);
    const std::string pp = origin + ".problem";

    Exponents exps;
    exps.p = num(field(jp, "p", pp), pp + ".p");
    exps.q = num(field(jp, "q", pp), pp + ".q");
    exps.validate();

    Direction dir = Direction::dual_Hstar;
    if (jp.contains("direction")) dir = direction_from_string(str(jp.at("direction"), pp + ".direction"));
    Cone cone = Cone::all_nonneg;
    if (jp.contains("cone")) cone = cone_from_string(str(jp.at("cone"), pp + ".cone"));

    WeightSpec v = parse_weight(field(jp, "v", pp), pp + ".v");
    WeightSpec w = parse_weight(field(jp, "w", pp), pp + ".w");
    Kernel U = parse_kernel(field(jp, "kernel", pp), pp + ".kernel");

    ExperimentConfig cfg{
        j.contains("id") ? str(j.at("id"), origin + ".id") : origin,
        ProblemSpec(std::move(v), std::move(w), std::move(U), exps, dir, cone),
        {},
        {},
    };

    if (j.contains("quad")) {
        const json& q = j.at("quad");
        const std::string qp = origin + ".quad";
        cfg.quad.rel_tol = num_or(q, "rel_tol", cfg.quad.rel_tol, qp);
        cfg.quad.abs_tol = num_or(q, "abs_tol", cfg.quad.abs_tol, qp);
        cfg.quad.max_depth = static_cast<int>(num_or(q, "max_depth", cfg.quad.max_depth, qp));
        cfg.quad.trunc_lo = num_or(q, "trunc_lo", cfg.quad.trunc_lo, qp);
        cfg.quad.trunc_hi = num_or(q, "trunc_hi", cfg.quad.trunc_hi, qp);
        cfg.quad.sup_grid = static_cast<int>(num_or(q, "sup_grid", cfg.quad.sup_grid, qp));
        cfg.quad.validate();
    }
    if (j.contains("oracle")) {
        const json& o = j.at("oracle");
        const std::string op = origin + ".oracle";
        cfg.oracle.budget = static_cast<int>(num_or(o, "budget", cfg.oracle.budget, op));
        cfg.oracle.restarts = static_cast<int>(num_or(o, "restarts", cfg.oracle.restarts, op));
        cfg.oracle.seed = static_cast<std::uint64_t>(num_or(o, "seed", double(cfg.oracle.seed), op));
        cfg.oracle.grid = static_cast<int>(num_or(o, "grid", cfg.oracle.grid, op));
        cfg.oracle.lo = num_or(o, "lo", cfg.oracle.lo, op);
        cfg.oracle.hi = num_or(o, "hi", cfg.oracle.hi, op);
    }
    if (j.contains("partitions")) {
        const json& s = j.at("partitions");
        const std::string sp = origin + ".partitions";
        cfg.search_budget = static_cast<int>(num_or(s, "budget", cfg.search_budget, sp));
        cfg.search_seed = static_cast<std::uint64_t>(num_or(s, "seed", double(cfg.search_seed), sp));
    }
    if (j.contains("outputs")) {
        const json& o = j.at("outputs");
        if (o.contains("json")) cfg.out_json = str(o.at("json"), origin + ".outputs.json");
        if (o.contains("csv")) cfg.out_csv = str(o.at("csv"), origin + ".outputs.csv");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    return parse_config(j, path);
}

int hb_threads() {
    if (const char* env = std::getenv("HB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

json run_functionals(const ExperimentConfig& cfg, const std::vector<std::string>& which) {
    json out;
    out["id"] = cfg.id;
    out["regime"] = json();
    json items = json::array();
    if (which.empty()) {
        FunctionalReport rep = predict(cfg.problem, cfg.quad);
        out["regime"] = rep.regime;
        out["predicted_constant"] = jreal(rep.predicted_constant);
        out["bounded"] = rep.bounded;
        for (const auto& it : rep.items)
            items.push_back({{"name", it.name},
                             {"value", jreal(it.value)},
                             {"err", jreal(it.err)},
                             {"finite", it.finite},
                             {"reason", it.reason}});
    } else {
        for (const auto& name : which) {
            const auto r = eval_functional(cfg.problem, name, cfg.quad);
            items.push_back({{"name", name},
                             {"value", jreal(r.value)},
                             {"err", jreal(r.err_estimate)},
                             {"finite", std::isfinite(r.value)},
                             {"reason", r.divergence_reason}});
        }
    }
    out["functionals"] = items;
    return out;
}

json run_partitions(const ExperimentConfig& cfg, DCondition which, int budget, std::uint64_t seed) {
    const DSearchResult res = search_sup_D(cfg.problem, which, budget, seed, cfg.quad);
    json seq = json::array();
    for (double t : res.best_seq.points) seq.push_back(jreal(t));
    return json{{"id", cfg.id},
                {"which", to_string(which)},
                {"best_value", jreal(res.best_value)},
                {"best_seq", seq},
                {"evaluations", res.evaluations}};
}

json run_discretize(const ExperimentConfig& cfg, int mu, const std::vector<std::string>& emit) {
    const auto& spec = cfg.problem;
    const double cap = spec.exps.theta_cap(spec.U.theta());
    WeightSpec w = spec.w;
    if (std::isinf(w.total_mass()))
        throw std::invalid_argument(
            "discretize: the weight has infinite mass; truncate it (the construction applies to "
            "finite-mass weights and extends by truncation)");
    const Rescaled rs = rescale_to_cap_power(w, cap);
    if (mu > rs.K - 2) mu = rs.K - 6;
    const LevelSequence lv = build_levels(rs.w, cap, mu, rs.K);
    const BlockStructure bs = build_blocks(lv, rs.w, spec.U, spec.exps.q, cfg.quad);

    auto want = [&emit](const char* what) {
        return emit.empty() || std::find(emit.begin(), emit.end(), what) != emit.end();
    };
    json out{{"id", cfg.id}, {"cap", cap}, {"K", rs.K}, {"mu", mu}, {"rescale_c", rs.c}};
    if (want("levels")) {
        json levels = json::object();
        for (int k = lv.lo; k <= lv.K; ++k) levels[std::to_string(k)] = jreal(lv.level(k));
        out["levels"] = levels;
    }
    if (want("blocks")) {
        out["blocks"] = {{"starts", bs.starts}, {"multi", bs.multi}, {"N", bs.N}};
    }
    if (want("report")) {
        const BlockReport rep = verify_block_properties(lv, bs, rs.w, spec.U, spec.exps.q, cfg.quad);
        out["report"] = {{"ok", rep.ok},
                         {"failure", rep.failure},
                         {"growth_min_ratio", jreal(rep.growth_min_ratio)},
                         {"prefix_max_ratio", jreal(rep.prefix_max_ratio)},
                         {"partial_max_ratio", jreal(rep.partial_max_ratio)},
                         {"seg_vs_integral_max", jreal(rep.seg_vs_integral_max)},
                         {"weighted_prefix_max", jreal(rep.weighted_prefix_max)},
                         {"weighted_prefix_strict_max", jreal(rep.weighted_prefix_strict_max)},
                         {"partition_ok", rep.partition_ok}};
    }
    return out;
}

json run_oracle(const ExperimentConfig& cfg) {
    const OracleResult res = maximize_ratio(cfg.problem, cfg.oracle, cfg.quad);
    json nodes = json::array(), values = json::array();
    for (double t : res.argmax.nodes) nodes.push_back(jreal(t));
    for (double x : res.argmax.values) values.push_back(jreal(x));
    return json{{"id", cfg.id},
                {"C_lb", jreal(res.C_lb)},
                {"unbounded_witnessed", res.unbounded_witnessed},
                {"evaluations", res.evaluations},
                {"note", res.note},
                {"argmax", {{"nodes", nodes}, {"values", values}, {"nonincreasing", res.argmax.nonincreasing}}}};
}

namespace {

EquivalenceRow equivalence_row(const std::string& path) {
    const ExperimentConfig cfg = load_config(path);
    const ProblemSpec& spec = cfg.problem;
    EquivalenceRow row;
    row.id = cfg.id;

    const FunctionalReport rep = predict(spec, cfg.quad);
    row.regime = rep.regime;
    row.bounded = rep.bounded;
    double a_sum = 0.0;
    for (const auto& it : rep.items) a_sum += it.value;
    row.a_sum = a_sum;
    row.predicted_c = rep.predicted_constant;

    if (spec.cone == Cone::all_nonneg) {
        // discrete conditions live on the dual orientation; primal problems
        // evaluate them on the reflected triple (same value by substitution)
        const ProblemSpec dspec = spec.direction == Direction::dual_Hstar ? spec : spec.reflected();
        const DCondition d1 = spec.exps.p1_regime() ? DCondition::D3 : DCondition::D1;
        const DCondition d2 = spec.exps.p1_regime() ? DCondition::D4 : DCondition::D2;
        const auto s1 = search_sup_D(dspec, d1, cfg.search_budget, cfg.search_seed, cfg.quad);
        const auto s2 = search_sup_D(dspec, d2, cfg.search_budget, splitmix64(cfg.search_seed), cfg.quad);
        row.d_sum = s1.best_value + s2.best_value;
    }

    const OracleResult oc = maximize_ratio(spec, cfg.oracle, cfg.quad);
    row.c_lb = oc.C_lb;
    row.note = oc.note;
    row.r1 = row.predicted_c / oc.C_lb;
    row.r2 = row.a_sum / row.d_sum;
    return row;
}

}  // namespace

std::vector<EquivalenceRow> run_equivalence(const std::vector<std::string>& config_paths) {
    std::vector<std::string> paths = config_paths;
    std::sort(paths.begin(), paths.end());
    std::vector<EquivalenceRow> rows(paths.size());
    const int max_threads = hb_threads();
    std::size_t next = 0;
    while (next < paths.size()) {
        const std::size_t batch = std::min<std::size_t>(max_threads, paths.size() - next);
        std::vector<std::future<EquivalenceRow>> futs;
        for (std::size_t i = 0; i < batch; ++i)
            futs.push_back(std::async(std::launch::async, equivalence_row, paths[next + i]));
        for (std::size_t i = 0; i < batch; ++i) rows[next + i] = futs[i].get();
        next += batch;
    }
    return rows;
}

std::string equivalence_csv(const std::vector<EquivalenceRow>& rows) {
    std::ostringstream out;
    out << "id,regime,A_sum,predicted_C,D_sum,C_lb,R1,R2,verdict\n";
    auto cell = [](double x) { return std::isnan(x) ? std::string() : fmt17(x); };
    for (const auto& r : rows) {
        out << r.id << ',' << '"' << r.regime << '"' << ',' << cell(r.a_sum) << ','
            << cell(r.predicted_c) << ',' << cell(r.d_sum) << ',' << cell(r.c_lb) << ','
            << cell(r.r1) << ',' << cell(r.r2) << ',' << (r.bounded ? "bounded" : "unbounded")
            << '\n';
    }
    return out.str();
}

std::string equivalence_table(const std::vector<EquivalenceRow>& rows) {
    std::ostringstream out;
    auto cell = [](double x) {
        if (std::isnan(x)) return std::string("-");
        std::ostringstream s;
        s.precision(4);
        s << x;
        return s.str();
    };
    out << "id          A_sum      pred_C     D_sum      C_lb       R1       R2     verdict\n";
    for (const auto& r : rows) {
        out << r.id;
        for (std::size_t i = r.id.size(); i < 12; ++i) out << ' ';
        for (double x : {r.a_sum, r.predicted_c, r.d_sum, r.c_lb}) {
            std::string c = cell(x);
            out << c;
            for (std::size_t i = c.size(); i < 11; ++i) out << ' ';
        }
        for (double x : {r.r1, r.r2}) {
            std::string c = cell(x);
            out << c;
            for (std::size_t i = c.size(); i < 9; ++i) out << ' ';
        }
        out << (r.bounded ? "bounded" : "unbounded") << '\n';
    }
    return out.str();
}

}  // namespace hb
