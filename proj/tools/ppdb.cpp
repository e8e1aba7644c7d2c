#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "ppdb/inference.hpp"
#include "ppdb/io.hpp"
#include "ppdb/parser.hpp"

using namespace ppdb;

namespace {

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::ParseError:
        case ErrorCode::TypeMismatch:
        case ErrorCode::SchemaMismatch:
        case ErrorCode::UnknownRelation:
        case ErrorCode::UnknownAttribute:
        case ErrorCode::BadAttributePosition:
        case ErrorCode::DomainMismatch:
        case ErrorCode::BadRange:
        case ErrorCode::NameClash:
        case ErrorCode::DuplicateAttributeInType:
        case ErrorCode::EmptyCategorical:
        case ErrorCode::UnsafeRule:
        case ErrorCode::InvalidPdb:
            return 2;
        default:
            return 3;
    }
}

struct Common {
    std::string schema_path;
    std::string pdb_path;
    std::string query_path;
    std::string event_path;
    std::string partition_path;
    std::vector<std::string> data;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 0;
    double level = 0.95;
    int threads = 0;
    std::string format = "table";
};

Schema load_schema(const Common& c) { return schema_from_json(read_file(c.schema_path)); }

BagInstance load_data(const Common& c, const Schema& schema) {
    BagInstance out;
    for (const auto& entry : c.data) {
        auto eq = entry.find('=');
        if (eq != std::string::npos) {
            std::string rel = entry.substr(0, eq);
            instance_add_csv(out, schema, rel, read_file(entry.substr(eq + 1)));
        } else {
            BagInstance part = instance_from_json_lines(read_file(entry), schema);
            for (const auto& [f, m] : part.entries()) out.insert(f, m);
        }
    }
    return out;
}

QueryPtr load_query(const Common& c, const Schema& schema) {
    if (c.query_path.empty()) return q_extract(schema.relations.begin()->first);
    return parse_query(read_file(c.query_path), schema);
}

// identity "query" covering the full instance: a view extracting every
// relation; used when no -q is given
bool has_query(const Common& c) { return !c.query_path.empty(); }

void apply_threads(const Common& c) {
#ifdef _OPENMP
    if (c.threads > 0) omp_set_num_threads(c.threads);
#else
    (void)c;
#endif
}

void print_instance(const BagInstance& inst, const std::string& format) {
    if (format == "json") {
        std::cout << instance_to_json(inst) << "\n";
        return;
    }
    for (const auto& [f, m] : inst.entries())
        std::cout << f.to_string() << "\t" << m << "\n";
}

WorldSampler sampler_of(const PdbFile& pdb, const Schema& schema) {
    if (std::holds_alternative<FinitePdb>(pdb))
        return make_finite_sampler(std::get<FinitePdb>(pdb));
    return make_sampler(std::get<PointProcessPdb>(pdb), schema);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ppdb: probabilistic databases as finite point processes"};
    app.require_subcommand(1);

    Common c;
    double alpha = 0.5;
    std::size_t k = 1;
    std::uint64_t nworlds = 1;
    bool strict = false;

    auto add_common = [&](CLI::App* sub, bool needs_pdb) {
        sub->add_option("-s,--schema", c.schema_path, "schema JSON file")->required();
        if (needs_pdb) sub->add_option("-p,--pdb", c.pdb_path, "PDB JSON file")->required();
        sub->add_option("-q,--query", c.query_path, "query text file");
        sub->add_option("--threads", c.threads, "OpenMP worker count (0 = default)");
        sub->add_option("--format", c.format, "table | json");
    };

    auto* cmd_eval = app.add_subcommand("eval", "evaluate a query on one instance");
    add_common(cmd_eval, false);
    cmd_eval->add_option("-d,--data", c.data, "instance data: JSON-lines file or R=file.csv");

    auto* cmd_exact = app.add_subcommand("exact", "exact event probability on a finite PDB");
    add_common(cmd_exact, true);
    cmd_exact->add_option("-e,--event", c.event_path, "counting event JSON")->required();

    auto* cmd_estimate = app.add_subcommand("estimate", "Monte Carlo event probability");
    add_common(cmd_estimate, true);
    cmd_estimate->add_option("-e,--event", c.event_path, "counting event JSON")->required();
    cmd_estimate->add_option("--samples", c.samples, "number of draws");
    cmd_estimate->add_option("--seed", c.seed, "RNG seed");
    cmd_estimate->add_option("--level", c.level, "confidence level");

    auto* cmd_marginals = app.add_subcommand("marginals", "per-cell marginal probabilities");
    add_common(cmd_marginals, true);
    cmd_marginals->add_option("--partition", c.partition_path, "partition JSON")->required();
    cmd_marginals->add_option("--samples", c.samples, "number of draws (samplers)");
    cmd_marginals->add_option("--seed", c.seed, "RNG seed");
    cmd_marginals->add_option("--level", c.level, "confidence level");

    auto* cmd_threshold = app.add_subcommand("threshold", "cells with marginal >= alpha");
    add_common(cmd_threshold, true);
    cmd_threshold->add_option("--partition", c.partition_path, "partition JSON")->required();
    cmd_threshold->add_option("--alpha", alpha, "threshold")->required();
    cmd_threshold->add_option("--samples", c.samples, "number of draws (samplers)");
    cmd_threshold->add_option("--seed", c.seed, "RNG seed");
    cmd_threshold->add_option("--level", c.level, "confidence level");
    cmd_threshold->add_flag("--strict", strict, "exit 4 when any cell is undecided");

    auto* cmd_topk = app.add_subcommand("topk", "k most probable cells");
    add_common(cmd_topk, true);
    cmd_topk->add_option("--partition", c.partition_path, "partition JSON")->required();
    cmd_topk->add_option("-k", k, "how many cells")->required();
    cmd_topk->add_option("--samples", c.samples, "number of draws (samplers)");
    cmd_topk->add_option("--seed", c.seed, "RNG seed");
    cmd_topk->add_option("--level", c.level, "confidence level");

    auto* cmd_condition = app.add_subcommand("condition", "condition a finite PDB on an event");
    add_common(cmd_condition, true);
    cmd_condition->add_option("-e,--event", c.event_path, "counting event JSON")->required();

    auto* cmd_sample = app.add_subcommand("sample", "draw worlds from a PDB");
    add_common(cmd_sample, true);
    cmd_sample->add_option("--seed", c.seed, "RNG seed");
    cmd_sample->add_option("-n", nworlds, "number of worlds");

    app.add_subcommand("demo-types", "run the view-locality separations");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_eval->parsed()) {
            Schema schema = load_schema(c);
            BagInstance data = load_data(c, schema);
            QueryPtr q = load_query(c, schema);
            print_instance(eval(*q, schema, data), c.format);
            return 0;
        }
        if (cmd_exact->parsed()) {
            Schema schema = load_schema(c);
            PdbFile pdb = pdb_from_json(read_file(c.pdb_path), schema);
            if (!std::holds_alternative<FinitePdb>(pdb))
                throw Error(ErrorCode::TypeMismatch, "exact inference needs a finite PDB");
            CountingEvent ev = event_from_json(read_file(c.event_path));
            const FinitePdb& fp = std::get<FinitePdb>(pdb);
            Rational p = has_query(c)
                             ? pushforward_exact(fp, schema, *load_query(c, schema), ev)
                             : exact_event_probability(fp, schema, ev);
            std::cout << p.to_string() << "\n";
            return 0;
        }
        if (cmd_estimate->parsed()) {
            apply_threads(c);
            Schema schema = load_schema(c);
            PdbFile pdb = pdb_from_json(read_file(c.pdb_path), schema);
            CountingEvent ev = event_from_json(read_file(c.event_path));
            QueryPtr q = has_query(c) ? load_query(c, schema) : nullptr;
            WorldSampler sampler = sampler_of(pdb, schema);
            Estimate est;
            if (q) est = pushforward_mc(sampler, schema, *q, ev, c.samples, c.seed, c.level);
            else {
                // identity: test the event against the sampled world directly
                std::uint64_t hits = 0;
                for (std::uint64_t i = 0; i < c.samples; ++i)
                    if (event_satisfied(ev, schema, sampler.sample(c.seed, i))) ++hits;
                est = wilson_estimate(hits, c.samples, c.level, c.seed);
            }
            std::cout << estimate_to_json(est) << "\n";
            return 0;
        }
        if (cmd_marginals->parsed() || cmd_threshold->parsed() || cmd_topk->parsed()) {
            apply_threads(c);
            Schema schema = load_schema(c);
            PdbFile pdb = pdb_from_json(read_file(c.pdb_path), schema);
            Partition partition = partition_from_json(read_file(c.partition_path));
            QueryPtr q = load_query(c, schema);
            bool exact = std::holds_alternative<FinitePdb>(pdb);
            if (cmd_marginals->parsed()) {
                if (exact) {
                    auto m = marginals_exact(std::get<FinitePdb>(pdb), schema, *q, partition);
                    for (std::size_t i = 0; i < m.size(); ++i)
                        std::cout << "cell_" << i << "\t" << m[i].to_string() << "\n";
                } else {
                    auto m = marginals_mc(sampler_of(pdb, schema), schema, *q, partition,
                                          c.samples, c.seed, c.level);
                    for (std::size_t i = 0; i < m.size(); ++i)
                        std::cout << "cell_" << i << "\t" << estimate_to_json(m[i]) << "\n";
                }
                return 0;
            }
            if (cmd_threshold->parsed()) {
                if (exact) {
                    auto cells = threshold_exact(std::get<FinitePdb>(pdb), schema, *q,
                                                 partition, alpha);
                    for (auto i : cells) std::cout << "cell_" << i << "\n";
                    return 0;
                }
                auto dec = threshold_mc(sampler_of(pdb, schema), schema, *q, partition, alpha,
                                        c.samples, c.seed, c.level);
                bool undecided = false;
                for (std::size_t i = 0; i < dec.size(); ++i) {
                    const char* s = dec[i] == ThresholdDecision::In ? "in"
                                    : dec[i] == ThresholdDecision::Out ? "out"
                                                                       : "undecided";
                    if (dec[i] == ThresholdDecision::Undecided) undecided = true;
                    std::cout << "cell_" << i << "\t" << s << "\n";
                }
                return (strict && undecided) ? 4 : 0;
            }
            // topk
            if (exact) {
                auto top = topk_exact(std::get<FinitePdb>(pdb), schema, *q, partition, k);
                for (const auto& [cell, p] : top)
                    std::cout << "cell_" << cell << "\t" << p.to_string() << "\n";
            } else {
                auto top = topk_mc(sampler_of(pdb, schema), schema, *q, partition, k,
                                   c.samples, c.seed, c.level);
                for (const auto& e : top)
                    std::cout << "cell_" << e.cell << "\t" << estimate_to_json(e.estimate)
                              << (e.ci_overlaps_neighbor ? "\t(ci-overlap)" : "") << "\n";
            }
            return 0;
        }
        if (cmd_condition->parsed()) {
            Schema schema = load_schema(c);
            PdbFile pdb = pdb_from_json(read_file(c.pdb_path), schema);
            if (!std::holds_alternative<FinitePdb>(pdb))
                throw Error(ErrorCode::TypeMismatch, "conditioning needs a finite PDB");
            CountingEvent ev = event_from_json(read_file(c.event_path));
            FinitePdb out = condition(std::get<FinitePdb>(pdb), schema, ev);
            std::cout << finite_pdb_to_json(out) << "\n";
            return 0;
        }
        if (cmd_sample->parsed()) {
            Schema schema = load_schema(c);
            PdbFile pdb = pdb_from_json(read_file(c.pdb_path), schema);
            WorldSampler sampler = sampler_of(pdb, schema);
            for (std::uint64_t i = 0; i < nworlds; ++i)
                std::cout << instance_to_json(sampler.sample(c.seed, i)) << "\n";
            return 0;
        }
        // demo-types
        std::cout << classify_demo();
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
