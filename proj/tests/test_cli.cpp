#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "spinglass_cli_stdout.txt";
  const std::string cmd =
      std::string(SPINGLASS_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  return {WEXITSTATUS(rc), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path tmpdir() {
  const fs::path d = fs::temp_directory_path() / "spinglass_cli_test";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("usage errors exit nonzero") {
  CHECK(run_cli("").exit_code != 0);
  CHECK(run_cli("no-such-command").exit_code != 0);
  CHECK(run_cli("oracle-check --check bogus").exit_code != 0);
  CHECK(run_cli("phase-diagram --model pspin-k2 --beta-min 2 --beta-max 1").exit_code != 0);
}

TEST_CASE("capability violations exit with code 2") {
  CHECK(run_cli("maxcut --kind er --n 30 --d 3 --method brute --seed 1").exit_code == 2);
}

TEST_CASE("phase diagram sweep emits a full grid") {
  const fs::path out = tmpdir() / "pd.csv";
  const RunResult r = run_cli(
      "phase-diagram --model pspin-k2 --beta-min 0.2 --beta-max 3 --beta-steps 10 "
      "--lambda-min 0 --lambda-max 3 --lambda-steps 10 --out " +
      out.string());
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.substr(0, csv.find('\n')) == "beta,lambda,phase,b,q,psi");
  int rows = -1;  // header
  for (char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == 100);
  CHECK(fs::exists(out.string() + ".manifest.json"));
}

TEST_CASE("single point classifications") {
  const RunResult sg =
      run_cli("phase-diagram --model pspin-k2 --beta-min 2 --beta-max 2 --beta-steps 1 "
              "--lambda-min 0.5 --lambda-max 0.5 --lambda-steps 1");
  CHECK(sg.exit_code == 0);
  CHECK(sg.stdout_text.find("spin-glass") != std::string::npos);
  CHECK(sg.stdout_text.find(",0.5,") != std::string::npos);  // q = 1 - 1/beta

  const RunResult para =
      run_cli("phase-diagram --model sk --beta-min 0.5 --beta-max 0.5 --beta-steps 1 "
              "--lambda-min 0 --lambda-max 0 --lambda-steps 1");
  CHECK(para.exit_code == 0);
  CHECK(para.stdout_text.find("paramagnetic") != std::string::npos);
}

TEST_CASE("outputs are byte identical across replays and thread counts") {
  const fs::path a = tmpdir() / "amp_a.csv";
  const fs::path b = tmpdir() / "amp_b.csv";
  const fs::path c = tmpdir() / "amp_c.csv";
  const std::string base =
      "amp-sim --n 1200 --lambda 1.5 --eps 0.4 --T 4 --reps 4 --seed 7 --out ";
  CHECK(run_cli(base + a.string()).exit_code == 0);
  CHECK(run_cli(base + b.string()).exit_code == 0);
  CHECK(run_cli(base + c.string() + " --threads 4").exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) == slurp(c));
  CHECK(slurp(a).substr(0, slurp(a).find('\n')) ==
        "t,a_t,q_t,empirical_overlap,empirical_sqnorm");
}

TEST_CASE("complexity csv crosses zero at eps_star") {
  const RunResult r = run_cli("complexity --k 3 --x-min 0 --x-max 2 --points 201");
  CHECK(r.exit_code == 0);
  std::istringstream in(r.stdout_text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,S");
  double prev_x = 0.0, prev_s = 1.0, crossing = -1.0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const double x = std::stod(line.substr(0, comma));
    const double s = std::stod(line.substr(comma + 1));
    if (prev_s > 0.0 && s <= 0.0) crossing = 0.5 * (prev_x + x);
    prev_x = x;
    prev_s = s;
  }
  CHECK(crossing == doctest::Approx(1.1716748).epsilon(0.01 / 1.17));
}

TEST_CASE("fixed point json surfaces the solved point") {
  const RunResult r = run_cli("fixed-point --model sk --beta 2 --lambda 2");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("\"b\"") != std::string::npos);
  CHECK(r.stdout_text.find("0.9165") != std::string::npos);
}

TEST_CASE("maxcut json and graph round trip") {
  const fs::path gfile = tmpdir() / "graph.txt";
  const fs::path out = tmpdir() / "cut.json";
  const RunResult r = run_cli("maxcut --kind er --n 16 --d 4 --method brute --seed 3 "
                              "--graph-out " +
                              gfile.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  const std::string js = slurp(out);
  CHECK(js.find("\"cut_value\"") != std::string::npos);
  CHECK(js.find("\"prediction_per_vertex\": 1.763166726567") != std::string::npos);
  // rerun on the serialized graph: same optimum
  const RunResult r2 =
      run_cli("maxcut --method brute --graph-in " + gfile.string() + " --seed 9");
  CHECK(r2.exit_code == 0);
  const auto pos = js.find("\"cut_value\": ");
  const std::string val = js.substr(pos + 13, js.find(',', pos) - pos - 13);
  CHECK(r2.stdout_text.find("\"cut_value\": " + val) != std::string::npos);
}

TEST_CASE("monasson json reports the extraction") {
  const RunResult r = run_cli("monasson --k 3 --T 0.5 --points 120 --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("\"f_s\"") != std::string::npos);
  CHECK(r.stdout_text.find("\"f_d\"") != std::string::npos);
  CHECK(r.stdout_text.find("\"f_star\"") != std::string::npos);
}

TEST_CASE("oracle checks pass and exit zero") {
  const RunResult g = run_cli("oracle-check --check guerra --n 12 --beta 3 --reps 100 --seed 5");
  CHECK(g.exit_code == 0);
  CHECK(g.stdout_text.find("\"pass\": true") != std::string::npos);

  const RunResult p =
      run_cli("oracle-check --check pd-second-moment --m 0.5 --K 10000 --reps 1500 --seed 5");
  CHECK(p.exit_code == 0);

  const RunResult h =
      run_cli("oracle-check --check h-derivative --n 10 --beta 1.1 --lambda 0.7 --reps 10 "
              "--seed 5");
  CHECK(h.exit_code == 0);
}
