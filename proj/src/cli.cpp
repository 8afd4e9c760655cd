// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
#include "trapgen/cli.hpp"

#include "trapgen/fuzz.hpp"
#include "trapgen/generalizer.hpp"
#include "trapgen/oracle.hpp"
#include "trapgen/parser.hpp"
#include "trapgen/restrictor.hpp"
#include "trapgen/sampler.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace trapgen {

namespace {

struct CliExit {
    int code;
    std::string message;
};

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CliExit{kExitUsage, "cannot read " + path};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Problem load(const std::string& path) {
    std::string text = read_file(path);
    try {
        return parse_problem(text);
    } catch (const ParseError& e) {
        throw CliExit{kExitUsage, path + ":" + e.what()};
    }
}

struct SolveOptions {
    bool solve = false;
    std::vector<std::int64_t> box{-8, 8};
    std::int64_t denom = 2;
    std::uint64_t budget = 4096;

    void add_to(CLI::App* cmd, bool with_flag) {
        if (with_flag) {
            cmd->add_flag("--solve", solve, "Search the box for a satisfying reference vector");
        }
        cmd->add_option("--box", box, "Grid box LO HI")->expected(2);
        cmd->add_option("--denom", denom, "Grid denominator for rational variables")->check(CLI::PositiveNumber);
        cmd->add_option("--budget", budget, "Random probes before the exhaustive scan");
    }

    GridSpec grid() const {
        GridSpec spec{box.at(0), box.at(1), denom};
        try {
            spec.validate();
        } catch (const MalformedInput& e) {
            throw CliExit{kExitUsage, e.what()};
        }
        return spec;
    }
};

// Reference vector for generalization: the file's, unless --solve asks for one.
Vector reference_for(const Problem& p, const SolveOptions& so) {
    if (!so.solve) {
        if (!p.reference) {
            throw CliExit{kExitUsage, "no (reference ...) in the problem; pass --solve to search for one"};
        }
        return *p.reference;
    }
    auto v = naive_solve(p.formula, p.vars, so.grid(), so.budget);
    if (!v) {
        throw CliExit{kExitUnsat, "no satisfying vector in the search box"};
    }
    return *v;
}

struct SampleOptions {
    std::uint64_t count = 1;
    std::uint64_t seed = 0;
    std::string width = "1000";
    std::string granularity = "1048576";

    void add_to(CLI::App* cmd, bool with_count) {
        if (with_count) {
            cmd->add_option("--count", count, "Number of vectors")->required();
        }
        cmd->add_option("--seed", seed, "Random seed");
        cmd->add_option("--width", width, "Window width on unbounded sides");
        cmd->add_option("--granularity", granularity, "Lattice size for rational draws");
    }

    SamplerConfig config() const {
        SamplerConfig cfg;
        cfg.seed = seed;
        try {
            cfg.unbounded_width = Integer(width);
            cfg.open_granularity = Integer(granularity);
            cfg.validate();
        } catch (const std::invalid_argument&) {
            throw CliExit{kExitUsage, "width and granularity must be integers"};
        } catch (const MalformedInput& e) {
            throw CliExit{kExitUsage, e.what()};
        }
        return cfg;
    }
};

// Draws from the generalization of F around v: a restricted trapezoid for a
// positive region, the complement for a negative one.
class VectorSource {
public:
    VectorSource(const Problem& p, const Vector& v, const SamplerConfig& cfg)
        : vars_(p.vars), cfg_(cfg), region_(generalize(p.formula, v)) {
        if (region_.is_positive()) {
            sampler_.emplace(restrict(region_.body, v, vars_), vars_, cfg_);
        } else if (region_.body.empty()) {
            throw CliExit{kExitUnsat, "the generalized region is the complement of everything"};
        }
    }

    Vector draw(SamplerState& state) const {
        return sampler_ ? sampler_->draw(state) : sample_complement(region_.body, vars_, cfg_, state);
    }

    const Region& region() const { return region_; }

private:
    VarTable vars_;
    SamplerConfig cfg_;
    Region region_;
    std::optional<TrapezoidSampler> sampler_;
};

int cmd_generalize(const std::string& file, const SolveOptions& so, std::ostream& out) {
    Problem p = load(file);
    out << render_region(generalize(p.formula, reference_for(p, so)), p.vars) << "\n";
    return kExitOk;
}

std::string render_basis(const ChangeOfBasis& sigma, const VarTable& vars) {
    std::string out = "(basis (";
    bool first = true;
    for (const auto& [d, e] : sigma.substitutions()) {
        out += (first ? "" : " ") + std::string("(= ") + vars.name(d) + " " + render_polynomial(e, vars) + ")";
        first = false;
    }
    return out + "))";
}

int cmd_restrict(const std::string& file, const SolveOptions& so, std::ostream& out) {
    Problem p = load(file);
    Vector v = reference_for(p, so);
    Region r = generalize(p.formula, v);
    if (!r.is_positive()) {
        out << render_region(r, p.vars) << "\n";
        return kExitOk;
    }
    RestrictionResult res = restrict(r.body, v, p.vars);
    out << render_region(Region::positive(res.trapezoid), p.vars) << "\n" << render_basis(res.basis, p.vars) << "\n";
    return kExitOk;
}

int cmd_sample(const std::string& file, const SolveOptions& so, const SampleOptions& sa, std::ostream& out) {
    Problem p = load(file);
    VectorSource src(p, reference_for(p, so), sa.config());
    SamplerState state(sa.seed);
    std::string buf;
    for (std::uint64_t i = 0; i < sa.count; ++i) {
        buf += render_vector(src.draw(state));
        buf += '\n';
        if (buf.size() > (1u << 16)) {
            out << buf;
            buf.clear();
        }
    }
    out << buf;
    return kExitOk;
}

struct FuzzCliOptions {
    std::string cmd;
    std::optional<std::uint64_t> count;
    std::optional<double> seconds;
    bool per_vector = false;
    std::size_t queue = 4096;
};

int cmd_fuzz(const std::string& file, const SolveOptions& so, const SampleOptions& sa, const FuzzCliOptions& fo,
             std::ostream& out) {
    Problem p = load(file);
    FuzzOptions opts;
    opts.count = fo.count;
    if (fo.seconds) {
        opts.duration = std::chrono::duration<double>(*fo.seconds);
    }
    opts.per_vector = fo.per_vector;
    opts.queue_capacity = fo.queue;
    opts.argv = split_command(fo.cmd);

    VectorSource src(p, reference_for(p, so), sa.config());
    SamplerState state(sa.seed);
    FuzzReport rep = run_fuzz([&] { return render_vector(src.draw(state)); }, opts);

    out << "delivered " << rep.delivered << "\n";
    out << "crashes " << rep.crashes << "\n";
    out << "spawns " << rep.spawns << "\n";
    out << "seconds " << rep.seconds << "\n";
    out << "vectors_per_second " << static_cast<std::uint64_t>(rep.vectors_per_second()) << "\n";
    out << "first_crash " << rep.first_crash.value_or("none") << "\n";
    return kExitOk;
}

int cmd_check(const std::string& file, const SolveOptions& so, unsigned threads, bool inject_bad, std::ostream& out) {
    Problem p = load(file);
    GridSpec spec = so.grid();
    // Without a reference, take a model from the box, or any vector when there is none.
    Vector v = p.reference ? *p.reference
                           : naive_solve(p.formula, p.vars, spec, so.budget).value_or(Vector(p.vars.size()));
    Region r = generalize(p.formula, v);
    if (inject_bad) {
        r.sign = r.is_positive() ? Region::Sign::Negative : Region::Sign::Positive;
    }
    CheckOptions opts;
    opts.partitions = std::max(1u, threads);
    InvariantReport rep = check_invariants(p.formula, v, r, p.vars, spec, opts);

    out << "region " << render_region(r, p.vars) << "\n";
    out << "reference " << render_vector(v) << (rep.reference_satisfies ? " satisfies" : " falsifies")
        << " the formula\n";
    out << "agreement at reference " << (rep.inv1_ok ? "ok" : "FAILED") << "\n";
    out << "points " << rep.points_checked << "\n";
    out << "violations " << rep.violation_count << "\n";
    for (const auto& w : rep.inv2_violations) {
        out << "counterexample " << render_vector(w) << "\n";
    }
    return rep.passed() ? kExitOk : kExitViolation;
}

int cmd_heatmap(const std::string& file, const std::vector<std::string>& names, const SolveOptions& so,
                const SampleOptions& sa, std::ostream& out) {
    Problem p = load(file);
    std::array<Dimension, 2> dims{Dimension(0), Dimension(0)};
    for (std::size_t i = 0; i < 2; ++i) {
        auto d = p.vars.find(names.at(i));
        if (!d) {
            throw CliExit{kExitUsage, "unknown variable '" + names[i] + "'"};
        }
        dims[i] = *d;
    }
    VectorSource src(p, reference_for(p, so), sa.config());
    SamplerState state(sa.seed);
    std::string buf;
    for (std::uint64_t i = 0; i < sa.count; ++i) {
        Vector w = src.draw(state);
        buf += w[dims[0]].get_str() + "," + w[dims[1]].get_str() + "\n";
    }
    out << buf;
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalize, restrict and sample solutions of linear constraint problems", "trapgen"};
    app.require_subcommand(1);

    std::string file;
    SolveOptions so;
    SampleOptions sa;

    auto* gen = app.add_subcommand("generalize", "Print the region generalizing the reference vector");
    gen->add_option("FILE", file, "Problem file, or - for standard input")->required();
    so.add_to(gen, true);

    auto* res = app.add_subcommand("restrict", "Print the restricted trapezoid and its change of basis");
    res->add_option("FILE", file)->required();
    so.add_to(res, true);

    auto* smp = app.add_subcommand("sample", "Print random vectors from the generalized region");
    smp->add_option("FILE", file)->required();
    so.add_to(smp, true);
    sa.add_to(smp, true);

    FuzzCliOptions fo;
    std::uint64_t fuzz_count = 0;
    double fuzz_seconds = 0;
    auto* fz = app.add_subcommand("fuzz", "Stream vectors into a target program's standard input");
    fz->add_option("FILE", file)->required();
    fz->add_option("--cmd", fo.cmd, "Target command line")->required();
    auto* fz_count = fz->add_option("--count", fuzz_count, "Number of vectors to deliver");
    auto* fz_secs = fz->add_option("--seconds", fuzz_seconds, "Run for this long")->check(CLI::PositiveNumber);
    fz_count->excludes(fz_secs);
    fz->add_flag("--per-vector", fo.per_vector, "Start a new target for every vector");
    fz->add_option("--queue", fo.queue, "Capacity of the write queue")->check(CLI::PositiveNumber);
    so.add_to(fz, true);
    sa.add_to(fz, false);

    unsigned threads = 1;
    bool inject_bad = false;
    auto* chk = app.add_subcommand("check", "Check the generalization against the formula on a grid");
    chk->add_option("FILE", file)->required();
    so.add_to(chk, false);
    chk->add_option("--threads", threads, "Worker threads");
    chk->add_flag("--inject-bad-region", inject_bad, "Flip the region's sign (negative control)");

    std::vector<std::string> names;
    auto* hm = app.add_subcommand("heatmap", "Print sampled values of two variables as CSV");
    hm->add_option("FILE", file)->required();
    hm->add_option("--vars", names, "Two variable names")->expected(2)->required();
    so.add_to(hm, true);
    sa.add_to(hm, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            return cmd_generalize(file, so, out);
        }
        if (res->parsed()) {
            return cmd_restrict(file, so, out);
        }
        if (smp->parsed()) {
            return cmd_sample(file, so, sa, out);
        }
        if (fz->parsed()) {
            if (fz_count->count() == 0 && fz_secs->count() == 0) {
                throw CliExit{kExitUsage, "fuzz needs --count or --seconds"};
            }
            if (fz_count->count() > 0) {
                fo.count = fuzz_count;
            } else {
                fo.seconds = fuzz_seconds;
            }
            return cmd_fuzz(file, so, sa, fo, out);
        }
        if (chk->parsed()) {
            return cmd_check(file, so, threads, inject_bad, out);
        }
        if (hm->parsed()) {
            return cmd_heatmap(file, names, so, sa, out);
        }
    } catch (const CliExit& e) {
        err << "trapgen: " << e.message << "\n";
        return e.code;
    } catch (const ParseError& e) {
        err << "trapgen: " << file << ":" << e.what() << "\n";
        return kExitUsage;
    } catch (const MalformedInput& e) {
        err << "trapgen: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SpawnError& e) {
        err << "trapgen: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UnsatisfiableComplement& e) {
        err << "trapgen: " << e.what() << "\n";
        return kExitUnsat;
    } catch (const Error& e) {
        // Backtracking, span or internal failures: the pipeline broke its own guarantees.
        err << "trapgen: invariant violation: " << e.what() << "\n";
        return kExitViolation;
    }
    return kExitUsage;
}

} // namespace trapgen
