// End-to-end checks of the command-line tool; argv[1] is the binary path.
#include <cmath>
#include <cstdio>
#include <sys/wait.h>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string g_cli;
int g_failures = 0;

void expect(bool ok, const std::string& what) {
  std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

int run(const std::string& args, std::string* out = nullptr) {
  const std::string out_path = "/tmp/bdkin_cli_out.txt";
  const std::string cmd = g_cli + " " + args + " >" + out_path + " 2>&1";
  const int rc = std::system(cmd.c_str());
  if (out) {
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
  }
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ','))
      row.push_back(tok.empty() ? std::nan("") : std::stod(tok));
    if (!row.empty()) rows.push_back(row);
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-bdkin>\n");
    return 1;
  }
  g_cli = argv[1];

  {  // equilibrium on a custom table: z_bar = 1/2, infinite saturation mass
    const std::string table_a = "/tmp/bdkin_cli_a.txt", table_b = "/tmp/bdkin_cli_b.txt";
    {
      std::ofstream a(table_a), b(table_b);
      for (long i = 1; i <= 16384; ++i) {
        a << i << "\n";
        b << (i == 1 ? 1 : i - 1) << "\n";
      }
    }
    std::string out;
    const int rc = run("equilibrium --family custom --a-table @" + table_a + " --b-table @" +
                           table_b + " --rho 2 --out -",
                       &out);
    expect(rc == 0, "equilibrium exits 0");
    expect(out.find("\"rho_s\": \"infinite\"") != std::string::npos, "rho_s reported infinite");
    expect(out.find("\"z_bar\": 0.5") != std::string::npos, "z_bar = 0.5");
  }

  {  // counterexample: strictly decreasing ratio column
    const int rc = run(
        "counterexample --lambda 0 --rho 4 --gamma 0.5 --eps-grid 0.1,0.03,0.01,0.003 "
        "--out /tmp/bdkin_cli_ce");
    expect(rc == 0, "counterexample exits 0");
    auto rows = parse_csv(slurp("/tmp/bdkin_cli_ce.csv"));
    expect(rows.size() == 4, "counterexample row count");
    bool decreasing = true;
    for (std::size_t k = 1; k < rows.size(); ++k) decreasing &= rows[k][3] < rows[k - 1][3];
    expect(decreasing, "ratio column strictly decreasing");
    const std::string meta = slurp("/tmp/bdkin_cli_ce.json");
    expect(meta.find("\"xi\"") != std::string::npos, "metadata carries xi");
    expect(meta.find("\"flux_positive\"") != std::string::npos, "rows carry the flux mark");
  }

  {  // simulate --certify: zero violations and an envelope column
    const int rc = run(
        "simulate --family cf --gamma 1 --zs 1 --sigma 0 --mu 0.5 --rho 2 --N 256 "
        "--t-end 4 --cadence 0.02 --delta 0.05 --certify --out /tmp/bdkin_cli_sim");
    expect(rc == 0, "simulate --certify exits 0");
    const std::string meta = slurp("/tmp/bdkin_cli_sim.json");
    expect(meta.find("\"window_violations\": 0") != std::string::npos, "no window violations");
    expect(meta.find("\"envelope_violations\": 0") != std::string::npos,
           "no envelope violations");
    auto rows = parse_csv(slurp("/tmp/bdkin_cli_sim.csv"));
    expect(!rows.empty() && rows.front().size() == 8, "trajectory has 8 columns");
    expect(!std::isnan(rows.front()[7]), "envelope column filled");
  }

  {  // simulate --certify with the power regime (algebraic envelope)
    const int rc = run(
        "simulate --family cf --gamma 0.5 --zs 1 --sigma 0 --mu 0.5 --rho 2 --N 128 "
        "--t-end 2 --cadence 0.05 --delta 0.1 --beta 2 --certify --out /tmp/bdkin_cli_simb");
    expect(rc == 0, "simulate --certify --beta exits 0");
    const std::string meta = slurp("/tmp/bdkin_cli_simb.json");
    expect(meta.find("\"window_violations\": 0") != std::string::npos,
           "power regime: no window violations");
    expect(meta.find("\"envelope_violations\": 0") != std::string::npos,
           "power regime: no envelope violations");
  }

  {  // cf run writes the moment-bound column and converges
    const int rc = run(
        "cf --family cf --gamma 0.5 --zs 1 --sigma 0 --mu 0.5 --eta 0 --rho 1.5 --N 80 "
        "--t-end 1 --cadence 0.1 --k 2 --out /tmp/bdkin_cli_cf");
    expect(rc == 0, "cf exits 0");
    const std::string meta = slurp("/tmp/bdkin_cli_cf.json");
    expect(meta.find("\"moment_bound_violated\": false") != std::string::npos,
           "moment bound holds");
  }

  {  // validation failures exit 2
    expect(run("constants --family cf --gamma 1 --zs 1 --sigma 0 --mu 0.5 --rho 2 --beta 2") == 2,
           "conflicting regime options exit 2");
    expect(run("equilibrium --family bogus --rho 1") == 2, "unknown family exits 2");
    expect(run("equilibrium --no-such-flag") == 2, "unknown flag exits 2");
    expect(run("simulate --family cf --gamma 1 --zs 1 --sigma 0 --mu 0.5 --rho 2 "
               "--out /no/such/dir/base") == 2,
           "unwritable output path exits 2");
    // Supercritical mass for a family with finite saturation mass.
    expect(run("equilibrium --family cf --gamma 0.5 --zs 1 --sigma 2 --mu 0.5 --rho 100") == 2,
           "supercritical mass exits 2");
  }

  {  // logsob report includes the pair constants and hardy brackets
    std::string out;
    const int rc = run(
        "logsob --family cf --gamma 1 --zs 1 --sigma 0 --mu 0.5 --c1 0.5 --out -", &out);
    expect(rc == 0, "logsob exits 0");
    for (const char* key : {"\"lambda\"", "\"m\"", "\"D1\"", "\"B1\"", "\"hardy\"",
                            "\"b1sup\""})
      expect(out.find(key) != std::string::npos, std::string("logsob json has ") + key);
  }

  {  // constants for the linear regime emit the fixed JSON fields
    std::string out;
    const int rc = run(
        "constants --family cf --gamma 1 --zs 1 --sigma 0 --mu 0.5 --rho 2 --delta 0.1 "
        "--c1 0.5 --out -",
        &out);
    expect(rc == 0, "constants exits 0");
    for (const char* key : {"\"regime\"", "\"K\"", "\"exponent\"", "\"epsilon\"", "\"lambda\"",
                            "\"m\"", "\"D1\"", "\"D2\"", "\"B1\"", "\"B2\"", "\"flags\""})
      expect(out.find(key) != std::string::npos, std::string("constants json has ") + key);
  }

  {  // config file + flag override
    const std::string cfg_path = "/tmp/bdkin_cli_cfg.txt";
    {
      std::ofstream cfg(cfg_path);
      cfg << "family=cf\ngamma=1\nzs=1\nsigma=0\nmu=0.5\nrho=1\n";
    }
    std::string out;
    const int rc = run("equilibrium --config " + cfg_path + " --rho 2 --out -", &out);
    expect(rc == 0, "config-driven equilibrium exits 0");
    expect(out.find("\"z_bar\": 0.5") != std::string::npos, "flag overrides config rho");
  }

  {  // config-file init survives when the flag is absent
    const std::string cfg_path = "/tmp/bdkin_cli_cfg2.txt";
    {
      std::ofstream cfg(cfg_path);
      cfg << "family=cf\ngamma=1\nzs=1\nsigma=0\nmu=0.5\nrho=1\n"
          << "N=64\nt_end=0.2\ncadence=0.1\ninit=equilibrium\n";
    }
    const int rc = run("simulate --config " + cfg_path + " --out /tmp/bdkin_cli_sim2");
    expect(rc == 0, "config-driven simulate exits 0");
    auto rows = parse_csv(slurp("/tmp/bdkin_cli_sim2.csv"));
    // equilibrium init holds the monomer level fixed at z_bar
    bool pinned = !rows.empty();
    for (auto& r : rows) pinned &= std::abs(r[1] - rows.front()[1]) < 1e-9;
    expect(pinned, "config init=equilibrium respected without the flag");
  }

  std::printf("%s: %d failure(s)\n", g_failures == 0 ? "SUCCESS" : "FAILURE", g_failures);
  return g_failures;
}
