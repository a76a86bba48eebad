#include "rcmf/cli.hpp"

#include "rcmf/arith.hpp"
#include "rcmf/counting.hpp"
#include "rcmf/dependence.hpp"
#include "rcmf/errors.hpp"
#include "rcmf/halasz.hpp"
#include "rcmf/simulate.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

namespace rcmf::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr long long kCheckpointChunk = 512;

// ---------------------------------------------------------------- plumbing --

struct GlobalOpts {
    std::string format = "json";
    std::string output_path;
    std::uint64_t seed = kDefaultSeed;
    long long sieve_limit = 0;  // 0 = sized automatically per subcommand
    long long threads = 0;      // 0 = hardware concurrency
};

struct RecordSink {
    std::ostream* os = nullptr;
    std::ofstream file;
    std::string format;

    void open(const GlobalOpts& g, std::ostream& fallback) {
        format = g.format;
        if (!g.output_path.empty()) {
            file.open(g.output_path);
            if (!file)
                throw std::invalid_argument("cannot open output path: " + g.output_path);
            os = &file;
        } else {
            os = &fallback;
        }
    }

    void emit(const json& rec) {
        if (format == "csv") {
            std::string row = rec.value("record", "");
            for (const auto& [key, val] : rec.items()) {
                if (key == "record") continue;
                row += ',';
                if (val.is_string())
                    row += val.get<std::string>();
                else
                    row += val.dump();
            }
            (*os) << row << '\n';
        } else {
            (*os) << rec.dump() << '\n';
        }
    }
};

long long env_ll(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return 0;
    return std::atoll(v);
}

long long resolve_threads(const GlobalOpts& g) {
    if (g.threads > 0) return g.threads;
    long long env = env_ll("RCMF_THREADS");
    if (env > 0) return env;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? (long long)hc : 1;
}

long long resolve_sieve_limit(const GlobalOpts& g, long long needed) {
    long long chosen = g.sieve_limit > 0 ? g.sieve_limit : env_ll("RCMF_SIEVE_LIMIT");
    if (chosen > 0) {
        if (chosen < needed)
            throw std::invalid_argument(
                "sieve limit " + std::to_string(chosen) +
                " is below the required " + std::to_string(needed));
        return chosen;
    }
    return needed;
}

std::vector<long long> parse_ll_list(const std::string& s, const char* what) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            size_t pos = 0;
            out.push_back(std::stoll(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": bad integer '" + item + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

// dist-spec grammar: uniform | roots:q | atoms:<path>
// atoms file: CSV rows "numerator,denominator,weight" or "angle_float,weight"
CircleDistribution parse_dist_spec(const std::string& spec) {
    if (spec == "uniform") return CircleDistribution::uniform_continuous();
    if (spec.rfind("roots:", 0) == 0) {
        long long q = 0;
        try {
            q = std::stoll(spec.substr(6));
        } catch (const std::exception&) {
            throw std::invalid_argument("dist-spec: bad q in '" + spec + "'");
        }
        return CircleDistribution::uniform_roots(q);
    }
    if (spec.rfind("atoms:", 0) == 0) {
        std::string path = spec.substr(6);
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("dist-spec: cannot open atoms file " + path);
        std::vector<std::pair<AngleValue, double>> atoms;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::vector<std::string> fields;
            std::stringstream ss(line);
            std::string f;
            while (std::getline(ss, f, ',')) fields.push_back(f);
            try {
                if (fields.size() == 3) {
                    atoms.emplace_back(
                        AngleValue::rational(std::stoll(fields[0]), std::stoll(fields[1])),
                        std::stod(fields[2]));
                } else if (fields.size() == 2) {
                    atoms.emplace_back(AngleValue::real_turn(std::stod(fields[0])),
                                       std::stod(fields[1]));
                } else {
                    throw std::invalid_argument(line);
                }
            } catch (const std::exception&) {
                throw std::invalid_argument("dist-spec: bad atoms row '" + line + "'");
            }
        }
        return CircleDistribution::finite_atoms(std::move(atoms));
    }
    throw std::invalid_argument("dist-spec: expected uniform | roots:q | atoms:<path>, got '" +
                                spec + "'");
}

json dist_json(const std::string& spec) { return json(spec); }

std::string angle_string(const AngleValue& a) {
    if (a.is_rational()) return std::to_string(a.num) + "/" + std::to_string(a.den);
    return std::to_string(a.real);
}

const char* class_string(QuadrupleSolution::Class c) {
    return c == QuadrupleSolution::Class::Strict ? "strict" : "equal_middle";
}

// one record per solution: in csv mode this is exactly an (a,b,c,d,class) row
json quadruple_json(const QuadrupleSolution& s) {
    return json{{"record", "solution"}, {"a", s.a}, {"b", s.b}, {"c", s.c},
                {"d", s.d}, {"class", class_string(s.cls)}};
}

json classification_json(const LimitClassification& cls) {
    json rec{{"record", "classification"}};
    rec["kind"] = cls.kind == LimitClassification::Kind::UniformCircle ? "uniform_circle"
                                                                       : "uniform_roots";
    if (cls.kind == LimitClassification::Kind::UniformRoots) rec["q"] = cls.q;
    rec["c_bound"] = cls.c_bound;
    return rec;
}

// ------------------------------------------------------------- deps command --

struct DepsArgs {
    long long k = 0;
    long long q = 0;  // 0 = uniform-circle law
    long long n_lo = 1;
    long long n_max = 0;
    long long witness_n = 0;  // != 0: single-n witness lookup
    std::string solver = "auto";
    long long box_cap = kDefaultBoxCap;
    std::string checkpoint_path;
};

ModQSolver solver_of(const std::string& s) {
    if (s == "auto") return ModQSolver::Auto;
    if (s == "enumerate") return ModQSolver::Enumerate;
    if (s == "structured") return ModQSolver::Structured;
    throw std::invalid_argument("deps: solver must be auto|enumerate|structured");
}

json witness_record_uniform(long long n, long long k, const std::vector<long long>& m) {
    return json{{"record", "dependence"}, {"n", n}, {"k", k}, {"m", m}};
}

json witness_record_roots(const WitnessModQ& w) {
    return json{{"record", "dependence"}, {"n", w.n}, {"k", w.k}, {"q", w.q}, {"m", w.m}};
}

std::vector<json> scan_chunk(const DepsArgs& a, long long lo, long long hi,
                             const SpfTable& table) {
    std::vector<json> recs;
    if (a.q == 0) {
        for (auto& [n, basis] : scan_dependences_uniform(a.k, lo, hi, table))
            for (auto& v : basis.vectors) recs.push_back(witness_record_uniform(n, a.k, v));
    } else {
        for (auto& [n, w] :
             scan_dependences_roots(a.k, a.q, lo, hi, table, solver_of(a.solver), a.box_cap))
            recs.push_back(witness_record_roots(w));
    }
    return recs;
}

struct Checkpoint {
    long long next_n = 0;
    std::vector<json> records;
};

Checkpoint load_checkpoint(const DepsArgs& a) {
    Checkpoint cp;
    cp.next_n = a.n_lo;
    if (a.checkpoint_path.empty()) return cp;
    std::ifstream in(a.checkpoint_path);
    if (!in) return cp;  // nothing saved yet
    json state = json::parse(in);
    if (state.value("k", -1ll) != a.k || state.value("q", -1ll) != a.q ||
        state.value("n_lo", -1ll) != a.n_lo || state.value("n_max", -1ll) != a.n_max)
        throw std::invalid_argument("deps: checkpoint file does not match this scan");
    cp.next_n = state.value("next_n", a.n_lo);
    // rebuild in canonical field order so replayed records are byte-identical
    // even when the checkpoint was round-tripped by a key-sorting JSON tool
    for (auto& r : state["records"]) {
        if (r.contains("q"))
            cp.records.push_back(witness_record_roots(
                {r.at("n"), r.at("k"), r.at("q"), r.at("m").get<std::vector<long long>>()}));
        else
            cp.records.push_back(witness_record_uniform(
                r.at("n"), r.at("k"), r.at("m").get<std::vector<long long>>()));
    }
    return cp;
}

void save_checkpoint(const DepsArgs& a, const Checkpoint& cp) {
    if (a.checkpoint_path.empty()) return;
    json state{{"k", a.k},         {"q", a.q},           {"n_lo", a.n_lo},
               {"n_max", a.n_max}, {"next_n", cp.next_n}, {"records", cp.records}};
    std::string tmp = a.checkpoint_path + ".tmp";
    {
        std::ofstream out(tmp);
        out << state.dump();
    }
    std::rename(tmp.c_str(), a.checkpoint_path.c_str());
}

void run_deps(const DepsArgs& a, const GlobalOpts& g, RecordSink& sink) {
    if (a.k < 1) throw std::invalid_argument("deps: need --k >= 1");
    const long long threads = resolve_threads(g);
    const long long span_hi = a.witness_n ? a.witness_n : a.n_max;
    if (span_hi < 1) throw std::invalid_argument("deps: need --n-max (or --witness)");
    const long long limit = resolve_sieve_limit(g, span_hi + a.k);
    SpfTable table = build_spf(limit);

    json header{{"record", "config"},     {"subcommand", "deps"},
                {"k", a.k},               {"q", a.q},
                {"n_lo", a.n_lo},         {"n_max", a.n_max},
                {"witness_n", a.witness_n},
                {"solver", a.solver},     {"box_cap", a.box_cap},
                {"sieve_limit", limit},   {"threads", threads},
                {"format", g.format},
                {"advisory_independence_bound", independence_bound_hint(a.k)}};
    sink.emit(header);

    if (a.witness_n) {
        if (a.q == 0) {
            auto basis = find_dependence_uniform(a.witness_n, a.k, table);
            if (basis)
                for (auto& v : basis->vectors)
                    sink.emit(witness_record_uniform(a.witness_n, a.k, v));
            sink.emit(json{{"record", "summary"},
                           {"dependent", basis.has_value()},
                           {"kernel_dimension",
                            basis ? (long long)basis->vectors.size() : 0}});
        } else {
            auto w = find_dependence_roots(a.witness_n, a.k, a.q, table,
                                           solver_of(a.solver), a.box_cap);
            if (w) sink.emit(witness_record_roots(*w));
            sink.emit(json{{"record", "summary"}, {"dependent", w.has_value()}});
        }
        return;
    }

    Checkpoint cp = load_checkpoint(a);
    // batch-synchronous chunking: deterministic merge order regardless of the
    // parallelism degree, and a natural checkpoint boundary per batch
    while (cp.next_n <= a.n_max) {
        std::vector<std::pair<long long, long long>> chunks;
        long long n = cp.next_n;
        for (long long t = 0; t < threads && n <= a.n_max; ++t) {
            long long hi = std::min(n + kCheckpointChunk - 1, a.n_max);
            chunks.emplace_back(n, hi);
            n = hi + 1;
        }
        std::vector<std::vector<json>> results(chunks.size());
        if (chunks.size() == 1) {
            results[0] = scan_chunk(a, chunks[0].first, chunks[0].second, table);
        } else {
            std::vector<std::thread> pool;
            for (size_t i = 0; i < chunks.size(); ++i)
                pool.emplace_back([&, i] {
                    results[i] = scan_chunk(a, chunks[i].first, chunks[i].second, table);
                });
            for (auto& th : pool) th.join();
        }
        for (auto& r : results)
            for (auto& rec : r) cp.records.push_back(std::move(rec));
        cp.next_n = n;
        save_checkpoint(a, cp);
    }

    long long dependent_count = 0, largest = 0;
    long long last_n = -1;
    for (const json& rec : cp.records) {
        long long n = rec.value("n", 0ll);
        if (n != last_n) {
            ++dependent_count;
            last_n = n;
        }
        largest = std::max(largest, n);
        sink.emit(rec);
    }
    sink.emit(json{{"record", "summary"},
                   {"dependent_count", dependent_count},
                   {"largest_dependent_n", largest}});
}

// ----------------------------------------------------------- verify command --

struct VerifyArgs {
    long long n = 0, k = 0, q = 0;
    std::string m_spec;
    std::string cert_path;
};

void run_verify(const VerifyArgs& a, const GlobalOpts& g, RecordSink& sink) {
    struct Cert {
        long long n, k, q;
        std::vector<long long> m;
    };
    std::vector<Cert> certs;
    if (!a.cert_path.empty()) {
        std::ifstream in(a.cert_path);
        if (!in) throw std::invalid_argument("verify: cannot open " + a.cert_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json rec = json::parse(line);
            if (!rec.contains("n") || !rec.contains("k") || !rec.contains("m"))
                throw std::invalid_argument("verify: certificate needs n, k, m");
            certs.push_back({rec["n"].get<long long>(), rec["k"].get<long long>(),
                             rec.value("q", 0ll),
                             rec["m"].get<std::vector<long long>>()});
        }
    } else {
        if (a.n < 1 || a.k < 1 || a.m_spec.empty())
            throw std::invalid_argument("verify: need --cert or all of --n --k --m");
        certs.push_back({a.n, a.k, a.q, parse_ll_list(a.m_spec, "verify --m")});
    }

    long long needed = 0;
    for (const Cert& c : certs) needed = std::max(needed, c.n + c.k);
    const long long limit = resolve_sieve_limit(g, needed);
    SpfTable table = build_spf(limit);

    sink.emit(json{{"record", "config"}, {"subcommand", "verify"},
                   {"certificates", (long long)certs.size()},
                   {"sieve_limit", limit}, {"format", g.format}});
    for (const Cert& c : certs) {
        bool ok = c.q == 0 ? verify_witness(c.n, c.k, c.m, table)
                           : verify_witness(c.n, c.k, c.m, c.q, table);
        json rec{{"record", "verify"}, {"n", c.n}, {"k", c.k}};
        if (c.q != 0) rec["q"] = c.q;
        rec["m"] = c.m;
        rec["ok"] = ok;
        sink.emit(rec);
    }
}

// --------------------------------------------------------- simulate command --

struct SimulateArgs {
    std::string dist = "roots:2";
    long long N = 0;
    long long k = 1;
    bool patterns = false;
    std::string fourier_m;
};

void run_simulate(const SimulateArgs& a, const GlobalOpts& g, RecordSink& sink) {
    if (a.N < 1) throw std::invalid_argument("simulate: need --N >= 1");
    if (!a.patterns && a.fourier_m.empty())
        throw std::invalid_argument("simulate: nothing to do (use --patterns and/or --fourier)");
    CircleDistribution dist = parse_dist_spec(a.dist);
    std::vector<long long> fm;
    long long k = a.k;
    if (!a.fourier_m.empty()) {
        fm = parse_ll_list(a.fourier_m, "simulate --fourier");
        k = std::max<long long>(k, (long long)fm.size());
    }
    const long long limit = resolve_sieve_limit(g, a.N + k);
    SpfTable table = build_spf(limit);
    MultSample sample = sample_function(a.N + k, dist, g.seed, table);

    sink.emit(json{{"record", "config"}, {"subcommand", "simulate"},
                   {"dist", dist_json(a.dist)}, {"N", a.N}, {"k", a.k},
                   {"patterns", a.patterns}, {"fourier_m", fm},
                   {"seed", g.seed}, {"sieve_limit", limit}, {"format", g.format}});

    if (a.patterns) {
        auto counts = pattern_counts(sample, a.k, a.N);
        for (const auto& [pattern, count] : counts) {
            std::string key;
            for (const AngleValue& v : pattern) {
                if (!key.empty()) key += ',';
                key += angle_string(v);
            }
            sink.emit(json{{"record", "pattern"}, {"pattern", key}, {"count", count}});
        }
        sink.emit(json{{"record", "patterns_summary"},
                       {"distinct", (long long)counts.size()}, {"total", a.N}});
    }
    if (!fm.empty()) {
        std::complex<double> f = empirical_fourier(sample, (long long)fm.size(), fm, a.N);
        sink.emit(json{{"record", "fourier"}, {"m", fm}, {"re", f.real()},
                       {"im", f.imag()}, {"abs", std::abs(f)}});
    }
}

// ---------------------------------------------------------- moment commands --

struct Moment2Args {
    std::string m_spec;
    long long q = 0;
    long long n_prime = 0;
    long long N = 0;
    long long mc_reps = 0;
    std::string dist;  // optional override for the Monte-Carlo law
};

void run_moment2(const Moment2Args& a, const GlobalOpts& g, RecordSink& sink) {
    std::vector<long long> m = parse_ll_list(a.m_spec, "moment2 --m");
    if (a.N < 1) throw std::invalid_argument("moment2: need --N >= 1");
    if (a.mc_reps < 0 || a.mc_reps == 1)
        throw std::invalid_argument("moment2: --mc-reps must be 0 or >= 2");
    const long long k = (long long)m.size();
    const long long limit = resolve_sieve_limit(g, a.N + k);
    SpfTable table = build_spf(limit);

    MomentCountReport rep =
        a.q == 0 ? second_moment_exact_uniform(m, a.n_prime, a.N, table)
                 : second_moment_exact_roots(m, a.q, a.n_prime, a.N, table);

    sink.emit(json{{"record", "config"}, {"subcommand", "moment2"},
                   {"m", m}, {"q", a.q}, {"n_prime", a.n_prime}, {"N", a.N},
                   {"mc_reps", a.mc_reps}, {"seed", g.seed},
                   {"sieve_limit", limit}, {"format", g.format}});
    json rec{{"record", "moment2"}, {"m", rep.m}, {"q", rep.q},
             {"n_prime", rep.N_prime}, {"N", rep.N},
             {"diagonal", rep.diagonal_count}, {"nontrivial", rep.nontrivial_count},
             {"total", rep.total}};
    json pairs = json::array();
    for (auto& [x, y] : rep.witness_pairs) pairs.push_back(json::array({x, y}));
    rec["witness_pairs"] = pairs;
    sink.emit(rec);

    if (a.mc_reps > 0) {
        CircleDistribution dist = a.dist.empty()
                                      ? (a.q == 0 ? CircleDistribution::uniform_continuous()
                                                  : CircleDistribution::uniform_roots(a.q))
                                      : parse_dist_spec(a.dist);
        double mean = 0.0, m2 = 0.0;
        for (long long r = 0; r < a.mc_reps; ++r) {
            std::uint64_t sub_seed = prime_stream_word(g.seed, 0x5eed + r);
            MultSample s = sample_function(a.N + k, dist, sub_seed, table);
            double v = std::norm(partial_sum_products(s, m, a.n_prime, a.N));
            double delta = v - mean;
            mean += delta / (double)(r + 1);
            m2 += delta * (v - mean);
        }
        double se = std::sqrt(m2 / (double)(a.mc_reps - 1) / (double)a.mc_reps);
        double z = se > 0 ? std::abs(mean - (double)rep.total) / se : 0.0;
        sink.emit(json{{"record", "moment2_mc"}, {"reps", a.mc_reps}, {"mean", mean},
                       {"se", se}, {"exact", rep.total}, {"abs_z", z}});
    }
}

struct Moment4Args {
    long long N = 0;
    long long cap = kDefaultFourthMomentCap;
    bool ratio = false;
};

void run_moment4(const Moment4Args& a, const GlobalOpts& g, RecordSink& sink) {
    sink.emit(json{{"record", "config"}, {"subcommand", "moment4"}, {"n", a.N},
                   {"cap", a.cap}, {"ratio", a.ratio}, {"format", g.format}});
    FourthMomentReport rep = fourth_moment_counts(a.N, a.cap);
    sink.emit(json{{"record", "moment4"}, {"n", rep.N}, {"strict", rep.strict_count},
                   {"equal_middle", rep.equal_middle_count}, {"moment", rep.moment},
                   {"solution_count", (long long)rep.solutions.size()}});
    for (const auto& s : rep.solutions) sink.emit(quadruple_json(s));
    if (a.ratio) {
        RatioCheckReport rc = ratio_property_check(a.N, a.cap);
        sink.emit(json{{"record", "ratio"}, {"n", rc.N},
                       {"solution_count", rc.solution_count},
                       {"min_ratio", json::array({rc.min_ratio_d, rc.min_ratio_a})},
                       {"min_ratio_value",
                        rc.min_ratio_a ? (double)rc.min_ratio_d / (double)rc.min_ratio_a : 0.0},
                       {"all_above_threshold", rc.all_above_threshold}});
    }
}

void run_moment2q(long long q, long long N, const GlobalOpts& g, RecordSink& sink) {
    sink.emit(json{{"record", "config"}, {"subcommand", "moment2q"}, {"q", q},
                   {"n", N}, {"format", g.format}});
    sink.emit(json{{"record", "moment2q"}, {"q", q}, {"n", N},
                   {"nontrivial", moment_2q_nontrivial(q, N)}});
}

void run_ufamily(long long r_max, const GlobalOpts& g, RecordSink& sink) {
    sink.emit(json{{"record", "config"}, {"subcommand", "ufamily"}, {"r_max", r_max},
                   {"format", g.format}});
    UFamilyReport rep = u_family(r_max);
    sink.emit(json{{"record", "ufamily"}, {"r_max", r_max}, {"u", rep.u}});
    for (const auto& s : rep.quadruples) sink.emit(quadruple_json(s));
}

// ------------------------------------------------- halasz / rate / helson --

struct HalaszArgs {
    std::string dist = "roots:2";
    long long N = 0;
    double T = 10.0;
    double grid_step = 0.0;
};

void run_halasz(const HalaszArgs& a, const GlobalOpts& g, RecordSink& sink) {
    if (a.N < 3) throw std::invalid_argument("halasz: need --N >= 3");
    CircleDistribution dist = parse_dist_spec(a.dist);
    const long long limit = resolve_sieve_limit(g, a.N);
    SpfTable table = build_spf(limit);
    MultSample sample = sample_function(a.N, dist, g.seed, table);
    HalaszReport rep = halasz_M(sample, a.T, a.grid_step);
    sink.emit(json{{"record", "config"}, {"subcommand", "halasz"},
                   {"dist", dist_json(a.dist)}, {"N", a.N}, {"T", a.T},
                   {"grid_step", rep.grid_step}, {"seed", g.seed},
                   {"sieve_limit", limit}, {"format", g.format}});
    sink.emit(classification_json(classify_limit(dist)));
    sink.emit(json{{"record", "halasz"}, {"N", rep.N}, {"T", rep.T},
                   {"grid_step", rep.grid_step}, {"lambda_star", rep.lambda_star},
                   {"M", rep.M}, {"lhs", rep.lhs}, {"rhs_kernel", rep.rhs_kernel},
                   {"ratio", rep.lhs / rep.rhs_kernel}});
}

struct RateArgs {
    std::string dist;
    long long m = 1;
    std::string grid = "1000,10000,100000,1000000";
};

void run_rate(const RateArgs& a, const GlobalOpts& g, RecordSink& sink) {
    if (a.dist.empty()) throw std::invalid_argument("rate: need --dist");
    CircleDistribution dist = parse_dist_spec(a.dist);
    std::vector<long long> grid = parse_ll_list(a.grid, "rate --grid");
    std::sort(grid.begin(), grid.end());
    const long long N_max = grid.back();
    const long long limit = resolve_sieve_limit(g, N_max + 1);
    SpfTable table = build_spf(limit);
    // one sample at the largest N: the prefix property makes every smaller N a
    // restriction of the same function
    MultSample sample = sample_function(N_max + 1, dist, g.seed, table);

    sink.emit(json{{"record", "config"}, {"subcommand", "rate"},
                   {"dist", dist_json(a.dist)}, {"m", a.m}, {"grid", grid},
                   {"seed", g.seed}, {"sieve_limit", limit}, {"format", g.format}});
    LimitClassification cls = classify_limit(dist);
    sink.emit(classification_json(cls));

    std::vector<std::pair<long long, double>> points;
    for (long long N : grid) {
        double v = std::abs(empirical_fourier(sample, 1, {a.m}, N));
        points.emplace_back(N, v);
        sink.emit(json{{"record", "rate_point"}, {"N", N}, {"abs_fourier", v}});
    }
    json fit{{"record", "rate_fit"}};
    try {
        fit["c"] = rate_fit(points);
    } catch (const std::invalid_argument& e) {
        fit["c"] = nullptr;
        fit["error"] = e.what();
    }
    fit["window_hint"] = json::array({0.0, cls.c_bound});
    sink.emit(fit);
}

struct HelsonArgs {
    std::string dist = "uniform";
    long long N = 0;
    long long reps = 100;
};

void run_helson(const HelsonArgs& a, const GlobalOpts& g, RecordSink& sink) {
    if (a.N < 1) throw std::invalid_argument("helson: need --N >= 1");
    CircleDistribution dist = parse_dist_spec(a.dist);
    const long long limit = resolve_sieve_limit(g, a.N);
    SpfTable table = build_spf(limit);
    sink.emit(json{{"record", "config"}, {"subcommand", "helson"},
                   {"dist", dist_json(a.dist)}, {"N", a.N}, {"reps", a.reps},
                   {"seed", g.seed}, {"sieve_limit", limit}, {"format", g.format}});
    auto [mean, se] = mean_abs_partial_sum(dist, a.N, a.reps, g.seed, table);
    // the two reference values are report-only context: the conjectured-limit
    // experiments in the literature, never asserted against
    sink.emit(json{{"record", "helson"}, {"N", a.N}, {"reps", a.reps},
                   {"mean", mean}, {"se", se},
                   {"ref_mean_estimate", 0.8769}, {"ref_upper_estimate", 0.904}});
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"laboratory for random completely multiplicative functions"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output", g.output_path, "write records to a file instead of stdout");
    app.add_option("--seed", g.seed, "RNG seed (default fixed for reproducibility)");
    app.add_option("--sieve-limit", g.sieve_limit,
                   "sieve size override (env RCMF_SIEVE_LIMIT)");
    app.add_option("--threads", g.threads, "parallelism degree (env RCMF_THREADS)");

    DepsArgs deps;
    auto* cmd_deps = app.add_subcommand("deps", "dependence scans and witnesses");
    cmd_deps->add_option("--k", deps.k, "window width")->required();
    cmd_deps->add_option("--q", deps.q, "root-of-unity order (0 = uniform circle)");
    cmd_deps->add_option("--n-lo", deps.n_lo, "scan range start");
    cmd_deps->add_option("--n-max", deps.n_max, "scan range end");
    cmd_deps->add_option("--witness", deps.witness_n, "single n witness lookup");
    cmd_deps->add_option("--solver", deps.solver, "mod-q solver")
        ->check(CLI::IsMember({"auto", "enumerate", "structured"}));
    cmd_deps->add_option("--box-cap", deps.box_cap, "mod-q search-space cap");
    cmd_deps->add_option("--checkpoint", deps.checkpoint_path, "checkpoint/resume file");

    VerifyArgs verify;
    auto* cmd_verify = app.add_subcommand("verify", "check dependence certificates");
    cmd_verify->add_option("--n", verify.n, "window start");
    cmd_verify->add_option("--k", verify.k, "window width");
    cmd_verify->add_option("--q", verify.q, "modulus (0 = over the integers)");
    cmd_verify->add_option("--m", verify.m_spec, "comma-separated exponents");
    cmd_verify->add_option("--cert", verify.cert_path, "JSON Lines certificate file");

    SimulateArgs simulate;
    auto* cmd_simulate = app.add_subcommand("simulate", "sampled pattern/Fourier statistics");
    cmd_simulate->add_option("--dist", simulate.dist, "dist-spec: uniform|roots:q|atoms:<path>");
    cmd_simulate->add_option("--N", simulate.N, "sample length")->required();
    cmd_simulate->add_option("--k", simulate.k, "pattern window width");
    cmd_simulate->add_flag("--patterns", simulate.patterns, "emit pattern counts");
    cmd_simulate->add_option("--fourier", simulate.fourier_m,
                             "comma-separated m for an empirical Fourier coefficient");

    Moment2Args m2;
    auto* cmd_m2 = app.add_subcommand("moment2", "exact second-moment pair counts");
    cmd_m2->add_option("--m", m2.m_spec, "comma-separated exponents")->required();
    cmd_m2->add_option("--q", m2.q, "root-of-unity order (0 = uniform circle)");
    cmd_m2->add_option("--n-prime", m2.n_prime, "range start N'");
    cmd_m2->add_option("--N", m2.N, "range end")->required();
    cmd_m2->add_option("--mc-reps", m2.mc_reps, "Monte-Carlo cross-check replicas");
    cmd_m2->add_option("--dist", m2.dist, "override the Monte-Carlo sampling law");

    Moment4Args m4;
    auto* cmd_m4 = app.add_subcommand("moment4", "fourth-moment quadruple counts");
    cmd_m4->add_option("--n", m4.N, "range end")->required();
    cmd_m4->add_option("--cap", m4.cap, "quadratic-cost cap");
    cmd_m4->add_flag("--ratio", m4.ratio, "also emit the d/a ratio check");

    long long m2q_q = 2, m2q_N = 0;
    auto* cmd_m2q = app.add_subcommand("moment2q", "non-trivial 2q-tuple counts");
    cmd_m2q->add_option("--q", m2q_q, "half-tuple size, in {1,2,3}")->required();
    cmd_m2q->add_option("--n", m2q_N, "range end")->required();

    long long uf_rmax = 20;
    auto* cmd_uf = app.add_subcommand("ufamily", "the u_r recurrence family");
    cmd_uf->add_option("--r-max", uf_rmax, "largest index");

    HalaszArgs hz;
    auto* cmd_hz = app.add_subcommand("halasz", "Halasz functional M(N,T) on a sample");
    cmd_hz->add_option("--dist", hz.dist, "dist-spec");
    cmd_hz->add_option("--N", hz.N, "prime cutoff")->required();
    cmd_hz->add_option("--T", hz.T, "T parameter");
    cmd_hz->add_option("--grid-step", hz.grid_step, "lambda grid step (0 = 1/log N)");

    RateArgs rate;
    auto* cmd_rate = app.add_subcommand("rate", "empirical Fourier decay fit");
    cmd_rate->add_option("--dist", rate.dist, "dist-spec")->required();
    cmd_rate->add_option("--m", rate.m, "Fourier mode");
    cmd_rate->add_option("--grid", rate.grid, "comma-separated N grid");

    HelsonArgs helson;
    auto* cmd_helson = app.add_subcommand("helson", "report-only mean |sum X_n| / sqrt(N)");
    cmd_helson->add_option("--dist", helson.dist, "dist-spec");
    cmd_helson->add_option("--N", helson.N, "partial-sum length")->required();
    cmd_helson->add_option("--reps", helson.reps, "replicas");

    std::vector<std::string> argv_vec = args;
    std::vector<const char*> argv;
    argv.push_back("rcmf");
    for (const std::string& s : argv_vec) argv.push_back(s.c_str());

    try {
        app.parse((int)argv.size(), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        RecordSink sink;
        sink.open(g, out);
        if (cmd_deps->parsed()) run_deps(deps, g, sink);
        else if (cmd_verify->parsed()) run_verify(verify, g, sink);
        else if (cmd_simulate->parsed()) run_simulate(simulate, g, sink);
        else if (cmd_m2->parsed()) run_moment2(m2, g, sink);
        else if (cmd_m4->parsed()) run_moment4(m4, g, sink);
        else if (cmd_m2q->parsed()) run_moment2q(m2q_q, m2q_N, g, sink);
        else if (cmd_uf->parsed()) run_ufamily(uf_rmax, g, sink);
        else if (cmd_hz->parsed()) run_halasz(hz, g, sink);
        else if (cmd_rate->parsed()) run_rate(rate, g, sink);
        else if (cmd_helson->parsed()) run_helson(helson, g, sink);
        return 0;
    } catch (const resource_error& e) {
        err << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace rcmf::cli
