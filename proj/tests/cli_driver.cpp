// Drives the command line binary end to end in a scratch directory:
// generation, covering, nerve, deterministic pipeline reruns, GH bounds,
// certified transfer, file validation, and exit codes.
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "nervekit/json_io.hpp"

using nlohmann::json;

namespace {

int checks = 0, fails = 0;

void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) ++fails;
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << what << "\n";
}

std::string g_dir;
std::string g_bin;

int run(const std::string& args) {
    std::string cmd = "cd '" + g_dir + "' && '" + g_bin + "' " + args + " > cli.log 2>&1";
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
}

std::string slurp(const std::string& name) {
    std::ifstream in(g_dir + "/" + name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& name, const std::string& text) {
    std::ofstream out(g_dir + "/" + name, std::ios::binary);
    out << text;
}

json parse(const std::string& name) {
    json j = json::parse(slurp(name), nullptr, false);
    if (j.is_discarded()) {
        expect(false, name + " holds valid JSON");
        return json::object();
    }
    return j;
}

void drive() {
    // generation
    expect(run("gen --kind circle --n 240 --radius 1 --out space.json") == 0, "gen circle exits 0");
    json model = parse("space.json");
    expect(model["model"]["kind"] == "circle" && model["model"]["n"] == 240,
           "generated file carries its model block");
    expect(run("gen --kind circle --n 240 --radius 1 --jitter 0.001 --seed 3 --out jitter.json") == 0,
           "gen jittered circle exits 0");
    expect(run("gen --kind klein_bottle") == 1, "unsupported kind exits 1");

    // covering and nerve
    expect(run("cover --space space.json --epsilon 0.05 --seed 7 --out cov.json") == 0,
           "cover exits 0");
    expect(run("nerve --space space.json --covering cov.json --out nerve.json") == 0,
           "nerve exits 0");
    nervekit::NerveComplex K = nervekit::load_complex(parse("nerve.json"));
    expect(K.connected() && K.euler_characteristic() == 0,
           "circle nerve is connected with Euler characteristic 0");

    // pipeline determinism
    expect(run("pipeline --space space.json --epsilon 0.05 --seed 7 --report r1.json") == 0,
           "pipeline exits 0");
    expect(run("pipeline --space space.json --epsilon 0.05 --seed 7 --report r2.json") == 0,
           "pipeline rerun exits 0");
    std::string r1 = slurp("r1.json");
    expect(!r1.empty() && r1 == slurp("r2.json"), "pipeline reruns are byte-identical");
    json rep = parse("r1.json");
    expect(rep["pass"].get<bool>(), "pipeline report passes");
    expect(rep["zeta"]["round_trip_ok"].get<bool>(), "zeta round trip is certified");
    expect(rep["partition_of_unity"]["lip_xi_ok"].get<bool>(), "xi Lipschitz bound holds");
    expect(rep["theta"]["lip_ok"].get<bool>(), "Theta Lipschitz bound holds");

    // GH bounds on hand-written two-point spaces
    spit("a.json", "{\"dist\": [[0, 1], [1, 0]], \"labels\": [\"a0\", \"a1\"]}\n");
    spit("b.json", "{\"dist\": [[0, 3], [3, 0]], \"labels\": [\"b0\", \"b1\"]}\n");
    expect(run("gh --a a.json --b b.json --out gh.json") == 0, "gh exits 0");
    json gh = parse("gh.json");
    expect(gh["distortion_gh"].get<double>() == 1.0, "two-point distortion bound is exactly 1");
    expect(gh["approx_gh"].get<double>() == 2.0, "two-point approximation bound is exactly 2");

    // certified transfer between the circle and its jitter
    expect(run("transfer --a space.json --b jitter.json --epsilon 0.05 --steps 8 --certify "
               "--out tr.json") == 0,
           "certified transfer exits 0");
    json tr = parse("tr.json");
    expect(tr["matching_defect"].get<double>() <= 0.002, "index matching defect is at most 2 eta");
    expect(tr["F"]["displacement"].get<double>() <= 0.3, "transfer displacement is at most 6 eps");
    expect(tr["certificate"]["time_span"].get<double>() > 0.0, "certificate has a positive span");
    expect(tr["certificate"]["lipschitz"].get<double>() > 0.0,
           "certificate has a finite positive Lipschitz constant");
    expect(tr["round_trip_displacement"].get<double>() >= 0.0,
           "certificate reports the round trip displacement");

    // validation
    expect(run("verify --space space.json --covering cov.json") == 0, "verify exits 0");
    spit("bad.json", "{\"dist\": [[0, 1], [2, 0]], \"labels\": [\"x\", \"y\"]}\n");
    expect(run("verify --space bad.json") == 1, "asymmetric matrix exits 1");
    expect(run("verify --space missing.json") == 1, "missing file exits 1");

    // argument errors
    expect(run("gh --a a.json") == 2, "missing required option exits 2");
    expect(run("cover --bogus") == 2, "unknown option exits 2");
    expect(run("") == 2, "missing subcommand exits 2");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_driver <path-to-nervekit-binary>\n";
        return 1;
    }
    char* resolved = realpath(argv[1], nullptr);
    if (!resolved) {
        std::cerr << "cannot resolve binary path " << argv[1] << "\n";
        return 1;
    }
    g_bin = resolved;
    free(resolved);
    char tmpl[] = "/tmp/nervekit_cli_XXXXXX";
    const char* dir = mkdtemp(tmpl);
    if (!dir) {
        std::cerr << "cannot create scratch directory\n";
        return 1;
    }
    g_dir = dir;

    try {
        drive();
    } catch (const std::exception& e) {
        expect(false, std::string("driver aborted: ") + e.what());
    }
    std::cout << checks - fails << "/" << checks << " checks passed\n";
    return fails;
}
