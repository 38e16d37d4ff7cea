// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "cpir/formats.hpp"
#include "cpir/simulator.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "cpir");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    int code = cpir::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("cpir_cli_test_" + name);
    fs::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("encode writes N files, deterministically") {
    fs::path a = scratch("enc_a"), b = scratch("enc_b");
    auto r = cli({"encode", "--N", "3", "--K", "2", "--M", "2", "--q", "257", "--seed", "7", "--out", a.string()});
    REQUIRE(r.code == 0);
    cli({"encode", "--N", "3", "--K", "2", "--M", "2", "--q", "257", "--seed", "7", "--out", b.string()});
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        ++files;
        CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    }
    CHECK(files == 3);
}

TEST_CASE("encode rejects bad parameters") {
    auto r = cli({"encode", "--N", "7", "--K", "2", "--M", "2", "--q", "7", "--out", scratch("bad").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("FieldTooSmall") != std::string::npos);
    CHECK(cli({"encode", "--N", "3", "--K", "2", "--M", "2", "--q", "8", "--out", "x"}).code == 2);
    CHECK(cli({"encode", "--N", "3"}).code == 2);
    CHECK(cli({"encode", "--messages", "/nonexistent/m.csv", "--out", scratch("io").string()}).code == 3);
}

TEST_CASE("retrieve prints the rate line") {
    auto r = cli({"retrieve", "--N", "5", "--K", "3", "--M", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("rate 75/120 = 5/8 (= capacity: yes)") != std::string::npos);
    auto j = nlohmann::json::parse(r.out.substr(0, r.out.find("rate ")));
    CHECK(j["downloaded_symbols"] == 120);

    auto s = cli({"retrieve", "--N", "3", "--K", "2", "--M", "3", "--desired", "3", "--seed", "4"});
    CHECK(s.code == 0);
    CHECK(s.out.find("rate 54/114 = 9/19 (= capacity: yes)") != std::string::npos);
}

TEST_CASE("retrieve with failures") {
    auto r = cli({"retrieve", "--N", "5", "--K", "3", "--M", "2", "--fail", "4,5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("rate 75/120 = 5/8 (= capacity: yes)") != std::string::npos);
    CHECK(r.out.find("repaired: [4,5]") != std::string::npos);
    CHECK(cli({"retrieve", "--N", "5", "--K", "3", "--M", "2", "--fail", "1,2,3"}).code == 2);
    CHECK(cli({"retrieve", "--N", "5", "--K", "3", "--M", "2", "--desired", "3"}).code == 2);
}

TEST_CASE("retrieve from an encoded store with a self-check") {
    fs::path dir = scratch("store");
    fs::create_directories(dir);
    fs::path msgs = dir / "messages.csv";
    {
        cpir::CodeParams p = cpir::CodeParams::make(4, 2, 2);
        std::ofstream out(msgs);
        cpir::formats::write_messages(out, p, cpir::generate_messages(p, 12));
    }
    fs::path store = dir / "db";
    REQUIRE(cli({"encode", "--messages", msgs.string(), "--out", store.string()}).code == 0);
    fs::path report = dir / "report.json";
    fs::path recovered = dir / "recovered.csv";
    auto r = cli({"retrieve", "--store", store.string(), "--desired", "2", "--messages", msgs.string(), "--fail",
                  "1", "--out", report.string(), "--message-out", recovered.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("(= capacity: yes)") != std::string::npos);
    auto j = nlohmann::json::parse(slurp(report));
    CHECK(j["repaired"] == nlohmann::json::array({1}));
    CHECK(j["rate"] == "2/3");

    // Tamper with the source: the self-check must fail with exit 4.
    std::string text = slurp(msgs);
    std::size_t cut = text.find('\n', text.size() / 2 + 10);
    std::size_t line = text.rfind('\n', cut - 1) + 1;
    std::string row = text.substr(line, cut - line);
    std::string swapped = row == "0,0" ? "1,1" : "0,0";
    text.replace(line, cut - line, swapped);
    std::ofstream(msgs) << text;
    CHECK(cli({"retrieve", "--store", store.string(), "--desired", "2", "--messages", msgs.string()}).code == 4);

    CHECK(cli({"retrieve", "--store", (dir / "missing").string()}).code == 3);
}

TEST_CASE("dump-queries") {
    auto t = cli({"dump-queries", "--N", "5", "--K", "3", "--M", "2"});
    CHECK(t.code == 0);
    CHECK(t.out.find("repetition 3, round 2 (2 rows)") != std::string::npos);
    auto u = cli({"dump-queries", "--N", "3", "--K", "2", "--M", "3"});
    CHECK(u.out.find("repetition 2, round 1 (12 rows)") != std::string::npos);
    CHECK(u.out.find("repetition 2, round 2 (6 rows)") != std::string::npos);
    CHECK(u.out.find("repetition 2, round 3 (1 rows)") != std::string::npos);
    auto c = cli({"dump-queries", "--N", "2", "--K", "1", "--M", "2"});
    CHECK(c.out.find("x3[1]+x2[2]") != std::string::npos);

    auto j = cli({"dump-queries", "--N", "3", "--K", "2", "--M", "2", "--format", "json"});
    CHECK(j.code == 0);
    auto plan = nlohmann::json::parse(j.out);
    CHECK_FALSE(plan.contains("desired"));
    CHECK(plan["databases"].size() == 3);
    auto again = cli({"dump-queries", "--N", "3", "--K", "2", "--M", "2", "--format", "json"});
    CHECK(again.out == j.out);
    CHECK(cli({"dump-queries", "--N", "3", "--K", "4", "--M", "2"}).code == 2);
    CHECK(cli({"dump-queries", "--N", "3", "--K", "2", "--M", "2", "--format", "xml"}).code == 2);
}

TEST_CASE("capacity CSV") {
    auto r = cli({"capacity", "--M", "1,2,3,5,10", "--N", "10"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "Rc_num,Rc_den,M,C_num,C_den,C_decimal");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (line.find(",1,1,1,") != std::string::npos) {
            CHECK(line.substr(line.size() - 8) == "1.000000");
        }
    }
    CHECK(rows == 50);
    CHECK(r.out.find("1,10,1,1,1,1.000000") != std::string::npos);
    CHECK(r.out.find("1,1,10,1,10,0.100000") != std::string::npos);
}

TEST_CASE("audit") {
    auto ok = cli({"audit", "--N", "3", "--K", "2", "--M", "2", "--trials", "2000"});
    CHECK(ok.code == 0);
    auto j = nlohmann::json::parse(ok.out);
    CHECK(j["exact"] == "pass");
    CHECK(j["trials"] == 2000);
    CHECK(j["pairs"].size() == 1);
    CHECK(j["pairs"][0]["tv"].get<double>() < 0.05);

    CHECK(cli({"audit", "--N", "3", "--K", "2", "--M", "2", "--trials", "500", "--fixture", "leak"}).code == 5);
    CHECK(cli({"audit", "--N", "3", "--K", "2", "--M", "2", "--trials", "200", "--fixture", "census"}).code == 5);
    CHECK(cli({"audit", "--N", "3", "--K", "2", "--M", "2", "--trials", "10"}).code == 2);
}
