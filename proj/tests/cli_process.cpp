// Process-level checks of the installed CLI: exit codes, byte-identical
// reruns, and stream layout. Runs the real binary through /bin/sh.

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  std::printf("%s %s\n", ok ? "ok" : "FAIL", what.c_str());
  if (!ok) ++failures;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int shell(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const std::string bin = BIOECO_BIN;
const std::string fixtures = BIOECO_FIXTURE_DIR;

}  // namespace

int main() {
  const std::string out1 = "/tmp/bioeco_sweep_1.csv";
  const std::string out2 = "/tmp/bioeco_sweep_2.csv";

  int rc = shell(bin + " sweep --config " + fixtures + "/sweep.json --out " + out1 +
                 " 2>/dev/null");
  expect(rc == 0, "sweep exits 0");
  rc = shell(bin + " sweep --config " + fixtures + "/sweep.json --out " + out2 + " 2>/dev/null");
  expect(rc == 0, "sweep rerun exits 0");
  const std::string a = slurp(out1), b = slurp(out2);
  expect(!a.empty() && a == b, "sweep output is byte-identical across runs");
  expect(a.rfind("m,x_star,y_star,classification\n", 0) == 0, "sweep CSV header pinned");

  rc = shell(bin + " optimal --config " + fixtures + "/optimal.json --format json --out "
             "/tmp/bioeco_opt.json 2>/dev/null");
  expect(rc == 0, "optimal exits 0");
  expect(slurp("/tmp/bioeco_opt.json").find("\"x_opt\": 188.585758") != std::string::npos,
         "optimal JSON carries the solved stock");

  rc = shell("echo '{\"model\": {\"q3\": 1}}' > /tmp/bioeco_bad.json; " + bin +
             " equilibria --config /tmp/bioeco_bad.json >/dev/null 2>&1");
  expect(rc == 2, "unknown config key exits 2");

  rc = shell(bin + " sweep --config " + fixtures + "/optimal.json >/dev/null 2>&1");
  expect(rc == 2, "missing command block exits 2");

  // heavy harvest: no interior branch anywhere in the scan range
  rc = shell("printf '%s' '{\"model\": {\"r\": 1, \"k\": 200, \"p\": 0.2, \"a\": 0.04, "
             "\"m\": 0.5, \"d\": 0.5, \"e\": 0.25, \"q1\": 0.4, \"q2\": 0.6, \"E1\": 3, "
             "\"E2\": 1}, \"hopf\": {\"m_lo\": 0.1, \"m_hi\": 0.9, \"grid_points\": 10}}' "
             "> /tmp/bioeco_nobranch.json; " +
             bin + " hopf --config /tmp/bioeco_nobranch.json >/dev/null 2>&1");
  expect(rc == 3, "numerical failure exits 3");

  rc = shell("BIOECO_THREADS=abc " + bin + " equilibria --config " + fixtures +
             "/sweep.json >/dev/null 2>&1");
  expect(rc == 2, "invalid BIOECO_THREADS exits 2");
  rc = shell("BIOECO_THREADS=4 " + bin + " equilibria --config " + fixtures +
             "/sweep.json >/dev/null 2>&1");
  expect(rc == 0, "BIOECO_THREADS cap accepted");

  if (failures != 0) {
    std::printf("%d process check(s) failed\n", failures);
    return 1;
  }
  std::printf("all process checks passed\n");
  return 0;
}
