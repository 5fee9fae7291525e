// Copyright 2026 The ftdnd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ftdnd/cli.h"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ftdnd/circuit.h"
#include "ftdnd/code.h"
#include "gtest/gtest.h"

using namespace ftdnd;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ftdnd");
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("ftdnd_cli_" + std::to_string(::getpid()) + "_" +
                                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir);
    }
    void TearDown() override {
        fs::remove_all(dir);
    }
    std::string path(const std::string &name) const {
        return (dir / name).string();
    }
    fs::path dir;
};

}  // namespace

TEST_F(CliTest, codes_report_is_valid_json) {
    CliRun r = cli({"codes"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["schema_version"], kSchemaVersion);
    ASSERT_EQ(j["codes"].size(), 4u);
    for (const auto &c : j["codes"]) {
        ASSERT_TRUE(c["valid"].get<bool>()) << c["name"];
    }
}

TEST_F(CliTest, invalid_code_file_is_a_validation_failure) {
    std::string text = cli({"codes", "--code", "steane", "--render"}).out;
    ASSERT_NE(text.find("  X4X5X6X7\n"), std::string::npos) << text;
    // drop a qubit from one X check so it anticommutes with Z checks
    text.replace(text.find("  X4X5X6X7\n"), 11, "  X4X5X6\n");
    std::ofstream(path("bad.code")) << text;
    CliRun r = cli({"codes", "--file", path("bad.code")});
    ASSERT_EQ(r.code, kExitValidation) << r.out << r.err;
}

TEST_F(CliTest, exit_codes) {
    ASSERT_EQ(cli({}).code, kExitConfig);
    ASSERT_EQ(cli({"sweep", "--no-such-flag"}).code, kExitConfig);
    ASSERT_EQ(cli({"sweep", "--p", "0.3"}).code, kExitConfig);
    ASSERT_EQ(cli({"sim", "--protocol", "steane-d7"}).code, kExitConfig);
    std::ofstream(path("bad.json")) << "{\"schema_version\": 99}";
    ASSERT_EQ(cli({"timing", "--config", path("bad.json")}).code, kExitConfig);
    std::ofstream(path("broken.json")) << "{";
    ASSERT_EQ(cli({"timing", "--config", path("broken.json")}).code, kExitConfig);
    std::ofstream(path("junk.bin")) << "not a dataset\n";
    ASSERT_EQ(cli({"dataset", "info", "--data", path("junk.bin")}).code, kExitValidation);
    ASSERT_EQ(cli({"--help"}).code, kExitOk);
}

TEST_F(CliTest, divergence_exit_code) {
    ASSERT_EQ(cli({"dataset", "gen", "--target", "300", "--out", path("d.bin")}).code, kExitOk);
    CliRun r = cli({"train", "--data", path("d.bin"), "--optimizer", "sgd", "--lr", "1e300", "--std", "1", "--hidden",
                 "8", "--epochs", "3"});
    ASSERT_EQ(r.code, kExitDivergence) << r.err;
}

TEST_F(CliTest, flags_override_config) {
    std::ofstream(path("cfg.json")) << R"({"schema_version": 1, "protocol": "knill-d3", "shots": 500, "p": [0.001]})";
    CliRun r = cli({"sim", "--config", path("cfg.json"), "--shots", "700"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["config"]["protocol"], "knill-d3");
    ASSERT_EQ(j["config"]["shots"], 700);
    ASSERT_EQ(j["shots"], 700);
}

TEST_F(CliTest, timing_table) {
    CliRun r = cli({"timing"});
    ASSERT_EQ(r.code, kExitOk);
    ASSERT_NE(r.out.find("steane-d3,6,12,24,2.5,2.10 MB"), std::string::npos) << r.out;
    ASSERT_NE(r.out.find("surface-d5,36,72,27,13.3,"), std::string::npos) << r.out;
}

TEST_F(CliTest, sweep_single_point_has_no_fit) {
    CliRun r = cli({"sweep", "--protocol", "surface-d3", "--p", "2e-3", "--shots", "2000"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    ASSERT_NE(r.out.find("# warning:"), std::string::npos) << r.out;
    ASSERT_EQ(r.out.find("# p_th"), std::string::npos);
}

TEST_F(CliTest, outputs_do_not_depend_on_workers) {
    for (const char *w : {"1", "3"}) {
        std::string tag = w;
        ASSERT_EQ(cli({"sweep", "--protocol", "steane-d3", "--p", "1e-3,3e-3", "--shots", "30000", "--seed", "4",
                       "--workers", w, "--out", path("sweep" + tag + ".csv")})
                      .code,
                  kExitOk);
        CliRun g = cli({"dataset", "gen", "--protocol", "surface-d3", "--p", "3e-3", "--target", "3000", "--seed", "2",
                     "--workers", w, "--out", path("d" + tag + ".bin")});
        ASSERT_EQ(g.code, kExitOk) << g.err;
        std::ofstream(path("g" + tag + ".json")) << g.out;
        ASSERT_EQ(cli({"train", "--data", path("d1.bin"), "--hidden", "12,12", "--epochs", "2", "--batch", "64",
                       "--seed", "6", "--workers", w, "--model-out", path("n" + tag + ".bin"), "--out",
                       path("t" + tag + ".json")})
                      .code,
                  kExitOk);
    }
    for (const char *f : {"sweep%.csv", "d%.bin", "g%.json", "n%.bin", "t%.json"}) {
        std::string a = f, b = f;
        a.replace(a.find('%'), 1, "1");
        b.replace(b.find('%'), 1, "3");
        std::string sa = slurp(dir / a);
        ASSERT_FALSE(sa.empty()) << a;
        ASSERT_EQ(sa, slurp(dir / b)) << a;
    }
}

TEST_F(CliTest, model_pipeline) {
    ASSERT_EQ(cli({"dataset", "gen", "--target", "2000", "--seed", "5", "--out", path("d.bin")}).code, kExitOk);
    ASSERT_EQ(cli({"train", "--data", path("d.bin"), "--hidden", "16,16", "--epochs", "2", "--batch", "64",
                   "--model-out", path("n.bin"), "--history", path("h.csv")})
                  .code,
              kExitOk);
    ASSERT_EQ(slurp(dir / "h.csv").substr(0, 5), "epoch");
    CliRun e = cli({"eval", "--data", path("d.bin"), "--model", path("n.bin")});
    ASSERT_EQ(e.code, kExitOk) << e.err;
    CliRun q = cli({"quantize", "--data", path("d.bin"), "--model", path("n.bin"), "--k", "24", "--qmodel-out",
                 path("q.bin")});
    ASSERT_EQ(q.code, kExitOk) << q.err;
    CliRun eq = cli({"eval", "--data", path("d.bin"), "--qmodel", path("q.bin")});
    ASSERT_EQ(eq.code, kExitOk) << eq.err;
    auto fj = nlohmann::json::parse(e.out), qj = nlohmann::json::parse(eq.out);
    ASSERT_EQ(fj["float"]["mispredicted"], qj["quantized"]["mispredicted"]);
    CliRun t = cli({"hypertune", "--data", path("d.bin"), "--initial", "2", "--refine", "1", "--epochs", "1", "--batch",
                 "128", "--out", path("tuned.json")});
    ASSERT_EQ(t.code, kExitOk) << t.err;
    auto tj = nlohmann::json::parse(slurp(dir / "tuned.json"));
    ASSERT_EQ(tj["log"].size(), 3u);
    CliRun again = cli({"train", "--config", path("tuned.json"), "--data", path("d.bin"), "--epochs", "1"});
    ASSERT_EQ(again.code, kExitOk) << again.err;
    ASSERT_EQ(nlohmann::json::parse(again.out)["config"]["lr"], tj["best"]["lr"]);
    ASSERT_EQ(cli({"dataset", "gen", "--p", "1e-3", "--target", "500", "--out", path("d0.bin")}).code, kExitOk);
    CliRun x = cli({"crosstrain", "--model", path("n.bin"), "--data", path("d0.bin") + "," + path("d.bin")});
    ASSERT_EQ(x.code, kExitOk) << x.err;
    ASSERT_NE(x.out.find("\n0.001,"), std::string::npos) << x.out;
}

TEST_F(CliTest, lut_and_trace) {
    CliRun r = cli({"lut", "--code", "surface17", "--hook", "--table", path("t.lut")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    ASSERT_EQ(nlohmann::json::parse(r.out)["entries"], 256);
    ASSERT_TRUE(fs::exists(dir / "t.lut"));
    CliRun s = cli({"sim", "--protocol", "surface-d3", "--p", "0.02", "--shots", "100", "--trace", "3", "--trace-out",
                 path("trace.txt")});
    ASSERT_EQ(s.code, kExitOk) << s.err;
    std::string trace = slurp(dir / "trace.txt");
    ASSERT_NE(trace.find("# shot 2"), std::string::npos);
    ASSERT_GT(std::count(trace.begin(), trace.end(), '\n'), 5);
}

TEST_F(CliTest, encoder_file_matches_default) {
    const auto &steane = builtin_code("steane");
    std::ofstream(path("zero.circ")) << render_circuit(default_css_prep(steane, PrepBasis::Zero));
    std::ofstream(path("plus.circ")) << render_circuit(default_css_prep(steane, PrepBasis::Plus));
    std::vector<std::string> base{"sim", "--protocol", "steane-d3", "--p", "3e-3", "--shots", "5000"};
    CliRun a = cli(base);
    auto with = base;
    for (const char *s : {"--zero-encoder", "zero.circ", "--plus-encoder", "plus.circ"}) {
        with.push_back(std::string(s).find(".circ") != std::string::npos ? path(s) : s);
    }
    CliRun b = cli(with);
    ASSERT_EQ(a.code, kExitOk) << a.err;
    ASSERT_EQ(b.code, kExitOk) << b.err;
    auto ja = nlohmann::json::parse(a.out), jb = nlohmann::json::parse(b.out);
    ASSERT_EQ(ja["failures"], jb["failures"]);
    ASSERT_EQ(jb["config"]["zero_encoder"], path("zero.circ"));
    std::ofstream(path("broken.circ")) << "nonsense\n";
    with[with.size() - 3] = path("broken.circ");
    ASSERT_NE(cli(with).code, kExitOk);
}
