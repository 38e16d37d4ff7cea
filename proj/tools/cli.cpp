// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpir/analysis.hpp"
#include "cpir/error.hpp"
#include "cpir/formats.hpp"
#include "cpir/pir_scheme.hpp"
#include "cpir/privacy_audit.hpp"
#include "cpir/simulator.hpp"

namespace cpir::cli {

namespace fs = std::filesystem;

namespace {

struct CliConfig {
    std::uint32_t N = 0;
    std::uint32_t K = 0;
    std::uint32_t M = 0;
    std::uint32_t q = PrimeField::kDefaultModulus;
    std::uint64_t seed = 0;
    std::uint32_t desired = 1;
    std::vector<std::uint32_t> fail;
    std::string out;
    std::string store;
    std::string messages;
    std::string message_out;
    std::string format = "text";
    bool include_private = false;
    std::vector<std::uint32_t> m_values;
    std::vector<std::uint32_t> k_values;
    std::uint32_t trials = 2000;
    double threshold = 0.05;
    std::uint32_t db = 1;
    std::string fixture = "none";
};

void add_code_options(CLI::App* cmd, CliConfig& c, bool required) {
    auto* n = cmd->add_option("--N", c.N, "number of databases");
    auto* k = cmd->add_option("--K", c.K, "code dimension");
    auto* m = cmd->add_option("--M", c.M, "number of messages");
    if (required) {
        n->required();
        k->required();
        m->required();
    }
    cmd->add_option("--q", c.q, "prime field modulus")->capture_default_str();
    cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error(ErrorCode::Io, "cannot write " + path);
    }
    return f;
}

// Writes to `path`, or to `out` when the path is empty or "-".
template <typename Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
    if (path.empty() || path == "-") {
        write(out);
        return;
    }
    std::ofstream f = open_output(path);
    write(f);
    if (!f) {
        throw Error(ErrorCode::Io, "failed writing " + path);
    }
}

CodeParams params_of(const CliConfig& c) { return CodeParams::make(c.N, c.K, c.M, c.q); }

std::uint32_t desired_index(const CliConfig& c, const CodeParams& p) {
    if (c.desired < 1 || c.desired > p.M) {
        throw Error(ErrorCode::InvalidParams, "--desired must lie in 1..M");
    }
    return c.desired - 1;
}

std::set<std::uint32_t> failures_of(const CliConfig& c, const CodeParams& p) {
    std::set<std::uint32_t> out;
    for (std::uint32_t f : c.fail) {
        if (f < 1 || f > p.N) {
            throw Error(ErrorCode::InvalidParams, "--fail indices must lie in 1..N");
        }
        out.insert(f - 1);
    }
    if (out.size() > p.N - p.K) {
        throw Error(ErrorCode::InvalidParams, "at most N-K databases may fail");
    }
    return out;
}

MessageSet load_messages(const std::string& path, CodeParams& params) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot read " + path);
    }
    return formats::read_messages(in, params);
}

int cmd_encode(const CliConfig& c, std::ostream& out) {
    CodeParams params;
    MessageSet messages;
    if (!c.messages.empty()) {
        messages = load_messages(c.messages, params);
    } else {
        params = params_of(c);
        messages = generate_messages(params, c.seed);
    }
    GeneratorMatrix h = build_generator(params);
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec) {
        throw Error(ErrorCode::Io, "cannot create " + c.out);
    }
    for (const DatabaseContents& db : encode(messages, h)) {
        fs::path path = fs::path(c.out) / formats::database_filename(db.index);
        emit(path.string(), out, [&](std::ostream& o) { formats::write_database(o, params, db); });
    }
    out << "wrote " << params.N << " database files to " << c.out << '\n';
    return kOk;
}

void print_rate(std::ostream& out, const RetrievalReport& report, bool at_capacity) {
    const RetrievalResult& r = report.result;
    out << "rate " << r.desired_symbols << '/' << r.downloaded_symbols << " = " << r.achieved_rate.fraction()
        << " (= capacity: " << (at_capacity ? "yes" : "no") << ")\n";
    if (!report.repaired.empty()) {
        out << "repaired: [";
        for (std::size_t i = 0; i < report.repaired.size(); ++i) {
            out << (i ? "," : "") << report.repaired[i] + 1;
        }
        out << "]\n";
    }
}

int cmd_retrieve(const CliConfig& c, std::ostream& out, std::ostream& err) {
    RetrievalReport report;
    std::optional<MessageSet> source;
    CodeParams params;

    if (!c.store.empty()) {
        // Read every database file the store holds; params come from the headers.
        std::vector<DatabaseNode> nodes;
        for (std::size_t n = 0;; ++n) {
            fs::path path = fs::path(c.store) / formats::database_filename(n);
            if (!fs::exists(path)) {
                break;
            }
            std::ifstream in(path);
            CodeParams p;
            DatabaseContents db = formats::read_database(in, p);
            if (n > 0 && !(p == params)) {
                throw Error(ErrorCode::Io, "database files disagree on parameters");
            }
            params = p;
            nodes.emplace_back(std::move(db));
        }
        if (nodes.empty() || nodes.size() != params.N) {
            throw Error(ErrorCode::Io, "store " + c.store + " does not hold N database files");
        }
        if (!c.messages.empty()) {
            CodeParams mp;
            source = load_messages(c.messages, mp);
            if (!(mp == params)) {
                throw Error(ErrorCode::Io, "message file parameters differ from the store");
            }
        }
        const auto start = std::chrono::steady_clock::now();
        const std::uint32_t desired = desired_index(c, params);
        for (std::uint32_t f : failures_of(c, params)) {
            nodes[f].fail();
        }
        GeneratorMatrix h = build_generator(params);
        report.params = params;
        report.desired = desired;
        report.repaired = repair_failed(nodes, h);
        QueryPlan plan = plan_queries(params, desired, c.seed);
        report.answers = collect_answers(nodes, plan);
        for (const auto& a : report.answers) {
            report.per_db_answers.push_back(a.size());
        }
        report.result = reconstruct(plan, report.answers, h);
        report.duration =
            std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
    } else {
        params = params_of(c);
        SimConfig cfg{params, desired_index(c, params), c.seed, failures_of(c, params)};
        if (!c.messages.empty()) {
            CodeParams mp;
            source = load_messages(c.messages, mp);
            if (!(mp == params)) {
                throw Error(ErrorCode::Io, "message file parameters differ from --N/--K/--M/--q");
            }
        } else {
            source = generate_messages(params, c.seed);
        }
        report = run_retrieval(cfg, *source);
    }

    if (!c.message_out.empty()) {
        emit(c.message_out, out, [&](std::ostream& o) {
            formats::write_messages(o, params, MessageSet{report.result.message});
        });
    }
    emit(c.out, out, [&](std::ostream& o) { o << formats::report_json(report).dump(2) << '\n'; });

    const bool at_capacity = report.result.achieved_rate == capacity(params.N, params.K, params.M);
    print_rate(out, report, at_capacity);
    if (source && !(report.result.message == (*source)[report.desired])) {
        err << "reconstructed message differs from the source\n";
        return kMismatch;
    }
    if (!at_capacity) {
        err << "achieved rate differs from capacity\n";
        return kMismatch;
    }
    return kOk;
}

int cmd_dump_queries(const CliConfig& c, std::ostream& out) {
    CodeParams params = params_of(c);
    QueryPlan plan = plan_queries(params, desired_index(c, params), c.seed);
    if (c.format == "json") {
        emit(c.out, out, [&](std::ostream& o) { o << formats::plan_json(plan, c.include_private).dump(2) << '\n'; });
    } else {
        emit(c.out, out, [&](std::ostream& o) { formats::write_query_table(o, plan); });
    }
    return kOk;
}

int cmd_capacity(const CliConfig& c, std::ostream& out) {
    if (c.N < 1) {
        throw Error(ErrorCode::InvalidParams, "--N must be positive");
    }
    std::vector<std::uint32_t> ks = c.k_values;
    if (ks.empty()) {
        for (std::uint32_t k = 1; k <= c.N; ++k) {
            ks.push_back(k);
        }
    }
    std::vector<std::uint32_t> ms = c.m_values.empty() ? std::vector<std::uint32_t>{1, 2, 3, 5, 10} : c.m_values;
    auto curve = capacity_curve(ms, c.N, ks);
    emit(c.out, out, [&](std::ostream& o) { write_capacity_csv(o, curve); });
    return kOk;
}

int cmd_audit(const CliConfig& c, std::ostream& out) {
    CodeParams params = params_of(c);
    if (c.db < 1 || c.db > params.N) {
        throw Error(ErrorCode::InvalidParams, "--db must lie in 1..N");
    }
    Planner planner = plan_queries;
    if (c.fixture == "leak") {
        planner = fixtures::leaky_plan;
    } else if (c.fixture == "census") {
        planner = fixtures::perturbed_census_plan;
    }
    ShapeReport exact = exact_shape_invariance(params, c.seed, planner);
    std::vector<EmpiricalReport> empirical;
    empirical.push_back(empirical_view_test(params, c.db - 1, c.trials, c.threshold, c.seed, planner));
    emit(c.out, out, [&](std::ostream& o) {
        o << formats::audit_json(exact, empirical, c.trials, c.threshold).dump(2) << '\n';
    });
    bool pass = exact.pass;
    for (const auto& r : empirical) {
        pass = pass && r.pass;
    }
    return pass ? kOk : kAuditFailure;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::Io: return kIoError;
    case ErrorCode::SingularMatrix:
    case ErrorCode::InconsistentAnswers: return kMismatch;
    default: return kBadParams;
    }
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Private information retrieval over MDS-coded databases"};
    app.require_subcommand(1);
    CliConfig c;

    auto* encode_cmd = app.add_subcommand("encode", "encode messages into N database files");
    add_code_options(encode_cmd, c, false);
    encode_cmd->add_option("--messages", c.messages, "message CSV (default: generate from --seed)");
    encode_cmd->add_option("--out", c.out, "output directory")->required();

    auto* retrieve_cmd = app.add_subcommand("retrieve", "run one private retrieval");
    add_code_options(retrieve_cmd, c, false);
    retrieve_cmd->add_option("--desired", c.desired, "desired message, 1-based")->capture_default_str();
    retrieve_cmd->add_option("--fail", c.fail, "databases to fail and repair first, e.g. 4,5")->delimiter(',');
    retrieve_cmd->add_option("--store", c.store, "directory written by encode");
    retrieve_cmd->add_option("--messages", c.messages, "source message CSV for the self-check");
    retrieve_cmd->add_option("--message-out", c.message_out, "write the reconstructed message CSV");
    retrieve_cmd->add_option("--out", c.out, "report JSON path (default stdout)");

    auto* dump_cmd = app.add_subcommand("dump-queries", "print the query plan");
    add_code_options(dump_cmd, c, true);
    dump_cmd->add_option("--desired", c.desired, "desired message, 1-based")->capture_default_str();
    dump_cmd->add_option("--format", c.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    dump_cmd->add_flag("--private", c.include_private, "include the desired index in JSON");
    dump_cmd->add_option("--out", c.out, "output path (default stdout)");

    auto* capacity_cmd = app.add_subcommand("capacity", "capacity versus code rate as CSV");
    capacity_cmd->add_option("--N", c.N, "number of databases")->required();
    capacity_cmd->add_option("--M", c.m_values, "message counts, e.g. 1,2,3")->delimiter(',');
    capacity_cmd->add_option("--K", c.k_values, "code dimensions (default 1..N)")->delimiter(',');
    capacity_cmd->add_option("--out", c.out, "output path (default stdout)");

    auto* audit_cmd = app.add_subcommand("audit", "privacy audit of the query plans");
    add_code_options(audit_cmd, c, true);
    audit_cmd->add_option("--trials", c.trials, "plans sampled per desired index")->capture_default_str();
    audit_cmd->add_option("--threshold", c.threshold, "total-variation threshold")->capture_default_str();
    audit_cmd->add_option("--db", c.db, "database whose view is sampled, 1-based")->capture_default_str();
    audit_cmd->add_option("--fixture", c.fixture, "negative controls: leak or census")
        ->check(CLI::IsMember({"none", "leak", "census"}))
        ->capture_default_str();
    audit_cmd->add_option("--out", c.out, "report JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kBadParams;
    }

    try {
        if (*encode_cmd) {
            return cmd_encode(c, out);
        }
        if (*retrieve_cmd) {
            return cmd_retrieve(c, out, err);
        }
        if (*dump_cmd) {
            return cmd_dump_queries(c, out);
        }
        if (*capacity_cmd) {
            return cmd_capacity(c, out);
        }
        if (*audit_cmd) {
            return cmd_audit(c, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    }
    return kBadParams;
}

} // namespace cpir::cli
