#include "trapgen/fuzz.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

using namespace trapgen;

namespace {

std::filesystem::path temp_file(const std::string& tag) {
    auto p = std::filesystem::temp_directory_path() /
             ("trapgen_fuzz_" + tag + "_" + std::to_string(::getpid()) + ".txt");
    std::filesystem::remove(p);
    return p;
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        lines.push_back(line);
    }
    return lines;
}

// Numbered lines, so order and loss are visible at the sink.
std::function<std::string()> counter() {
    auto n = std::make_shared<std::uint64_t>(0);
    return [n] { return std::to_string((*n)++); };
}

} // namespace

TEST_CASE("split_command") {
    CHECK(split_command("prog a b") == std::vector<std::string>{"prog", "a", "b"});
    CHECK(split_command("prog 'a b' \"c d\"") == std::vector<std::string>{"prog", "a b", "c d"});
    CHECK_THROWS_AS(split_command("   "), SpawnError);
    CHECK_THROWS_AS(split_command("prog $(echo hi)"), SpawnError);
}

TEST_CASE("every line reaches the sink in order") {
    auto out = temp_file("order");
    FuzzOptions opts;
    opts.argv = {LINE_SINK_BIN, out.string()};
    opts.count = 20000;
    opts.queue_capacity = 16;
    FuzzReport rep = run_fuzz(counter(), opts);
    CHECK(rep.delivered == 20000);
    CHECK(rep.crashes == 0);
    CHECK(rep.spawns == 1);
    auto lines = read_lines(out);
    REQUIRE(lines.size() == 20000);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        REQUIRE(lines[i] == std::to_string(i));
    }
    std::filesystem::remove(out);
}

TEST_CASE("a slow target applies backpressure without loss") {
    auto out = temp_file("slow");
    FuzzOptions opts;
    opts.argv = {LINE_SINK_BIN, out.string(), "200"};
    opts.count = 300;
    opts.queue_capacity = 4;
    FuzzReport rep = run_fuzz(counter(), opts);
    CHECK(rep.delivered == 300);
    CHECK(read_lines(out).size() == 300);
    std::filesystem::remove(out);
}

TEST_CASE("a rigged target crashes once per vector in per-vector mode") {
    FuzzOptions opts;
    opts.argv = {CRASH_ON_SEVEN_BIN};
    opts.count = 25;
    opts.per_vector = true;
    FuzzReport rep = run_fuzz([] { return std::string("7"); }, opts);
    CHECK(rep.delivered == 25);
    CHECK(rep.crashes == rep.delivered);
    CHECK(rep.first_crash == "7");
}

TEST_CASE("a crashing target is respawned in streaming mode") {
    FuzzOptions opts;
    opts.argv = {CRASH_ON_SEVEN_BIN};
    opts.count = 2000;
    auto n = std::make_shared<int>(0);
    FuzzReport rep = run_fuzz([n] { return std::to_string((*n)++ % 10); }, opts);
    CHECK(rep.delivered == 2000);
    CHECK(rep.crashes >= 1);
    CHECK(rep.crashes + 1 >= rep.spawns);
    CHECK(rep.crashes <= rep.spawns);
    CHECK(rep.first_crash);
}

TEST_CASE("a healthy target never counts as crashed") {
    FuzzOptions opts;
    opts.argv = {CRASH_ON_SEVEN_BIN};
    opts.count = 500;
    opts.per_vector = true;
    FuzzReport rep = run_fuzz([] { return std::string("3"); }, opts);
    CHECK(rep.crashes == 0);
    CHECK(rep.spawns == 500);
    CHECK_FALSE(rep.first_crash);
}

TEST_CASE("duration mode stops on time") {
    auto out = temp_file("duration");
    FuzzOptions opts;
    opts.argv = {LINE_SINK_BIN, out.string()};
    opts.duration = std::chrono::milliseconds(300);
    FuzzReport rep = run_fuzz(counter(), opts);
    CHECK(rep.seconds >= 0.29);
    CHECK(rep.seconds < 5);
    CHECK(rep.delivered > 0);
    CHECK(read_lines(out).size() == rep.delivered);
    std::filesystem::remove(out);
}

TEST_CASE("spawn failures are reported") {
    FuzzOptions opts;
    opts.argv = {"/nonexistent/trapgen-target"};
    opts.count = 1;
    CHECK_THROWS_AS(run_fuzz(counter(), opts), SpawnError);
}

TEST_CASE("count and duration are mutually exclusive") {
    FuzzOptions opts;
    opts.argv = {CRASH_ON_SEVEN_BIN};
    CHECK_THROWS_AS(run_fuzz(counter(), opts), MalformedInput);
    opts.count = 1;
    opts.duration = std::chrono::seconds(1);
    CHECK_THROWS_AS(run_fuzz(counter(), opts), MalformedInput);
}

TEST_CASE("generator errors propagate") {
    FuzzOptions opts;
    opts.argv = {CRASH_ON_SEVEN_BIN};
    opts.count = 100;
    auto n = std::make_shared<int>(0);
    CHECK_THROWS_AS(run_fuzz(
                        [n]() -> std::string {
                            if (++*n == 50) {
                                throw MalformedInput("boom");
                            }
                            return "1";
                        },
                        opts),
                    MalformedInput);
}
