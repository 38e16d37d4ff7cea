// SPDX-License-Identifier: Apache-2.0

#include "cpir/formats.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "cpir/error.hpp"

namespace cpir::formats {

namespace {

std::vector<std::uint64_t> parse_csv_line(const std::string& line) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell.erase(0, cell.find_first_not_of(" \t\r"));
        cell.erase(cell.find_last_not_of(" \t\r") + 1);
        if (cell.empty() || cell.find_first_not_of("0123456789") != std::string::npos || cell.size() > 19) {
            throw Error(ErrorCode::Io, "expected a non-negative integer, got '" + cell + "'");
        }
        out.push_back(std::stoull(cell));
    }
    return out;
}

std::vector<std::uint64_t> read_line(std::istream& in, std::size_t expected, const char* what) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::Io, std::string("unexpected end of file reading ") + what);
    }
    auto values = parse_csv_line(line);
    if (values.size() != expected) {
        throw Error(ErrorCode::Io, std::string("wrong number of fields in ") + what);
    }
    return values;
}

CodeParams params_from(const std::vector<std::uint64_t>& h) {
    for (std::size_t i = 0; i < 4; ++i) {
        if (h[i] > 0xffffffffULL) {
            throw Error(ErrorCode::InvalidParams, "header value out of range");
        }
    }
    return CodeParams::make(static_cast<std::uint32_t>(h[0]), static_cast<std::uint32_t>(h[1]),
                            static_cast<std::uint32_t>(h[2]), static_cast<std::uint32_t>(h[3]));
}

Symbol checked_symbol(const CodeParams& params, std::uint64_t v) {
    if (!params.field.contains(v)) {
        throw Error(ErrorCode::Io, "symbol " + std::to_string(v) + " outside [0, q)");
    }
    return static_cast<Symbol>(v);
}

void write_header(std::ostream& out, const CodeParams& p) {
    out << p.N << ',' << p.K << ',' << p.M << ',' << p.field.modulus();
}

std::string subset_label(MessageSubset s) {
    std::string out = "{";
    for (std::uint32_t m = 0; m < 32; ++m) {
        if (s & (MessageSubset{1} << m)) {
            out += (out.size() > 1 ? "," : "") + std::to_string(m + 1);
        }
    }
    return out + "}";
}

} // namespace

void write_messages(std::ostream& out, const CodeParams& params, const MessageSet& messages) {
    write_header(out, params);
    out << '\n';
    for (const Matrix& w : messages) {
        for (std::size_t r = 0; r < w.rows(); ++r) {
            for (std::size_t c = 0; c < w.cols(); ++c) {
                out << (c ? "," : "") << w(r, c);
            }
            out << '\n';
        }
    }
}

MessageSet read_messages(std::istream& in, CodeParams& params) {
    params = params_from(read_line(in, 4, "message header"));
    const std::size_t rows = params.rows_per_message();
    MessageSet out;
    for (std::uint32_t m = 0; m < params.M; ++m) {
        std::vector<Symbol> entries;
        entries.reserve(rows * params.K);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::uint64_t v : read_line(in, params.K, "message row")) {
                entries.push_back(checked_symbol(params, v));
            }
        }
        out.emplace_back(rows, params.K, std::move(entries));
    }
    return out;
}

void write_database(std::ostream& out, const CodeParams& params, const DatabaseContents& db) {
    write_header(out, params);
    out << ',' << db.index + 1 << '\n';
    for (Symbol s : db.symbols) {
        out << s << '\n';
    }
}

DatabaseContents read_database(std::istream& in, CodeParams& params) {
    auto header = read_line(in, 5, "database header");
    params = params_from(header);
    if (header[4] < 1 || header[4] > params.N) {
        throw Error(ErrorCode::Io, "database index out of range");
    }
    DatabaseContents db;
    db.index = static_cast<std::size_t>(header[4] - 1);
    db.rows_per_message = params.rows_per_message();
    const std::size_t total = db.rows_per_message * params.M;
    db.symbols.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        db.symbols.push_back(checked_symbol(params, read_line(in, 1, "stored symbol")[0]));
    }
    return db;
}

std::string database_filename(std::size_t index) {
    return "db_" + std::to_string(index + 1) + ".csv";
}

nlohmann::json params_json(const CodeParams& p) {
    return {{"N", p.N}, {"K", p.K}, {"M", p.M}, {"q", p.field.modulus()}};
}

nlohmann::json plan_json(const QueryPlan& plan, bool include_private) {
    nlohmann::json out;
    out["params"] = params_json(plan.params);
    if (include_private) {
        out["desired"] = plan.desired + 1;
    }
    nlohmann::json dbs = nlohmann::json::array();
    for (const auto& queries : plan.queries) {
        nlohmann::json list = nlohmann::json::array();
        for (const Equation& eq : queries) {
            nlohmann::json terms = nlohmann::json::array();
            for (const Term& t : eq.terms) {
                terms.push_back({t.message + 1, t.row + 1});
            }
            list.push_back({{"terms", terms}});
        }
        dbs.push_back(std::move(list));
    }
    out["databases"] = std::move(dbs);
    return out;
}

void write_query_table(std::ostream& out, const QueryPlan& plan) {
    const CodeParams& p = plan.params;
    // Storage row -> interleaved row, per message.
    std::vector<std::vector<std::uint32_t>> inverse(plan.interleavers.size());
    for (std::size_t m = 0; m < plan.interleavers.size(); ++m) {
        inverse[m].resize(plan.interleavers[m].size());
        for (std::uint32_t i = 0; i < plan.interleavers[m].size(); ++i) {
            inverse[m][plan.interleavers[m][i]] = i;
        }
    }
    auto cell = [&](const Equation& eq) {
        std::string s;
        for (const Term& t : eq.terms) {
            s += (s.empty() ? "" : "+") + ("x" + std::to_string(inverse[t.message][t.row] + 1) + "[" +
                                           std::to_string(t.message + 1) + "]");
        }
        return s;
    };

    out << "query table (N,K,M)=(" << p.N << ',' << p.K << ',' << p.M << ") q=" << p.field.modulus()
        << " desired=W" << plan.desired + 1 << " seed=" << plan.seed << '\n';
    out << "rows are interleaved indices; databases receive x<i>[m] as storage row pi_m(i)\n";

    // cells[rep][round][db] in canonical order
    std::vector<std::vector<std::vector<std::vector<std::pair<std::uint32_t, std::string>>>>> cells(
        plan.repetitions, std::vector<std::vector<std::vector<std::pair<std::uint32_t, std::string>>>>(
                              p.M, std::vector<std::vector<std::pair<std::uint32_t, std::string>>>(p.N)));
    std::size_t width = 4;
    for (std::uint32_t n = 0; n < plan.queries.size(); ++n) {
        for (std::size_t pos = 0; pos < plan.queries[n].size(); ++pos) {
            const EquationTag& tag = plan.tags[n][pos];
            std::string text = cell(plan.queries[n][pos]);
            width = std::max(width, text.size());
            cells[tag.repetition][tag.round - 1][n].emplace_back(tag.canonical, std::move(text));
        }
    }
    width += 2;
    for (std::uint32_t rep = 0; rep < plan.repetitions; ++rep) {
        for (std::uint32_t round = 0; round < p.M; ++round) {
            auto& columns = cells[rep][round];
            std::size_t height = 0;
            for (auto& c : columns) {
                std::sort(c.begin(), c.end());
                height = std::max(height, c.size());
            }
            if (height == 0) {
                continue;
            }
            out << "repetition " << rep + 1 << ", round " << round + 1 << " (" << height << " rows)\n";
            for (std::uint32_t n = 0; n < p.N; ++n) {
                out << std::left << std::setw(static_cast<int>(width)) << ("DB" + std::to_string(n + 1));
            }
            out << '\n';
            for (std::size_t r = 0; r < height; ++r) {
                for (std::uint32_t n = 0; n < p.N; ++n) {
                    const std::string& text = r < columns[n].size() ? columns[n][r].second : std::string("-");
                    out << std::left << std::setw(static_cast<int>(width)) << text;
                }
                out << '\n';
            }
        }
    }
    out << "per database per repetition:";
    auto census = query_shape_census(plan, 0);
    if (!census.empty()) {
        for (const auto& [s, c] : census.front()) {
            out << ' ' << subset_label(s) << ':' << c;
        }
    }
    out << '\n';
}

nlohmann::json report_json(const RetrievalReport& report) {
    nlohmann::json out;
    out["params"] = params_json(report.params);
    out["desired"] = report.desired + 1;
    out["downloaded_symbols"] = report.result.downloaded_symbols;
    out["desired_symbols"] = report.result.desired_symbols;
    out["rate"] = report.result.achieved_rate.fraction();
    out["per_db"] = report.per_db_answers;
    nlohmann::json repaired = nlohmann::json::array();
    for (auto r : report.repaired) {
        repaired.push_back(r + 1);
    }
    out["repaired"] = repaired;
    return out;
}

nlohmann::json audit_json(const ShapeReport& exact, const std::vector<EmpiricalReport>& empirical,
                          std::uint32_t trials, double threshold) {
    nlohmann::json out;
    out["exact"] = exact.pass ? "pass" : "fail";
    if (!exact.violations.empty()) {
        nlohmann::json v = nlohmann::json::array();
        for (const auto& x : exact.violations) {
            v.push_back({{"desired", x.desired + 1}, {"db", x.db + 1}, {"repetition", x.repetition + 1},
                         {"detail", x.detail}});
        }
        out["violations"] = v;
    }
    nlohmann::json pairs = nlohmann::json::array();
    bool pass = true;
    for (const EmpiricalReport& r : empirical) {
        pass = pass && r.pass;
        for (const PairDistance& pd : r.pairs) {
            pairs.push_back({{"d1", pd.d1 + 1}, {"d2", pd.d2 + 1}, {"db", pd.db + 1}, {"tv", pd.tv}});
        }
    }
    out["pairs"] = pairs;
    out["empirical"] = pass ? "pass" : "fail";
    out["trials"] = trials;
    out["threshold"] = threshold;
    out["statistic"] = kViewStatistic;
    return out;
}

} // namespace cpir::formats
