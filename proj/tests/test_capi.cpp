#include <doctest.h>

#include <cstring>
#include <string>
#include <vector>

#include "zmc/zmc.h"

namespace {

struct Poly {
  zmc_poly* p = nullptr;
  ~Poly() { zmc_poly_free(p); }
};

struct Job {
  zmc_job* j = zmc_job_new();
  ~Job() { zmc_job_free(j); }
};

std::string render(const zmc_poly* p) {
  char* text = nullptr;
  REQUIRE(zmc_poly_render(p, &text) == ZMC_OK);
  std::string out(text);
  zmc_string_free(text);
  return out;
}

struct RunOutput {
  zmc_status status;
  int verdict = -1;
  std::string json, csv;
};

RunOutput run(zmc_job* job) {
  RunOutput out;
  char* json = nullptr;
  char* csv = nullptr;
  out.status = zmc_job_run(job, &out.verdict, &json, &csv);
  if (json) out.json = json;
  if (csv) out.csv = csv;
  zmc_string_free(json);
  zmc_string_free(csv);
  return out;
}

}  // namespace

TEST_SUITE("c api: polynomials") {
  TEST_CASE("parse, render and inspect") {
    Poly f;
    REQUIRE(zmc_poly_parse("x1^2 + 2 x1 x2 - 3", 2, &f.p) == ZMC_OK);
    CHECK(zmc_poly_nvars(f.p) == 2);
    CHECK(zmc_poly_degree(f.p) == 2);
    CHECK(zmc_poly_nterms(f.p) == 3);
    CHECK(render(f.p) == "x1^2 + 2 x1 x2 - 3");
    const double x[] = {1.0, 2.0};
    double v = 0.0;
    REQUIRE(zmc_poly_eval(f.p, x, 2, &v) == ZMC_OK);
    CHECK(v == 2.0);
    CHECK(zmc_poly_eval(f.p, x, 1, &v) == ZMC_ERR_DIMENSION);
  }

  TEST_CASE("error codes and messages") {
    Poly f;
    CHECK(zmc_poly_parse("x1 + * x2", 2, &f.p) == ZMC_ERR_PARSE);
    CHECK(f.p == nullptr);
    CHECK(std::strlen(zmc_last_error()) > 0);
    CHECK(zmc_poly_parse("x3", 2, &f.p) != ZMC_OK);
    CHECK(zmc_poly_parse(nullptr, 2, &f.p) == ZMC_ERR_ARGUMENT);
    CHECK(zmc_poly_parse("x1", 2, nullptr) == ZMC_ERR_ARGUMENT);
    CHECK(zmc_poly_family("ads:0,1,1", &f.p) != ZMC_OK);

    Poly a, b, c;
    REQUIRE(zmc_poly_parse("sqrt(2) x1", 2, &a.p) == ZMC_OK);
    REQUIRE(zmc_poly_parse("sqrt(3) x2", 2, &b.p) == ZMC_OK);
    CHECK(zmc_poly_add(a.p, b.p, &c.p) == ZMC_ERR_SURD);
    CHECK(zmc_poly_diff(a.p, 5, &c.p) != ZMC_OK);

    CHECK(zmc_poly_nvars(nullptr) == 0);
    CHECK(zmc_poly_degree(nullptr) == -1);
    zmc_poly_free(nullptr);
    zmc_string_free(nullptr);
    CHECK(std::string(zmc_version()) == "1.0.0");
  }

  TEST_CASE("arithmetic") {
    Poly a, b, sum, prod, d, q, r;
    REQUIRE(zmc_poly_parse("x1 + x2", 2, &a.p) == ZMC_OK);
    REQUIRE(zmc_poly_parse("x1 - x2", 2, &b.p) == ZMC_OK);
    REQUIRE(zmc_poly_add(a.p, b.p, &sum.p) == ZMC_OK);
    CHECK(render(sum.p) == "2 x1");
    REQUIRE(zmc_poly_mul(a.p, b.p, &prod.p) == ZMC_OK);
    CHECK(render(prod.p) == "x1^2 - x2^2");
    REQUIRE(zmc_poly_diff(prod.p, 1, &d.p) == ZMC_OK);
    CHECK(render(d.p) == "2 x1");
    REQUIRE(zmc_poly_divide(prod.p, a.p, &q.p, &r.p) == ZMC_OK);
    CHECK(render(q.p) == "x1 - x2");
    CHECK(render(r.p) == "0");
  }

  TEST_CASE("residual and conjecture check") {
    Poly f, g, h;
    REQUIRE(zmc_poly_family("ads:2,3,1", &f.p) == ZMC_OK);
    CHECK(zmc_poly_nvars(f.p) == 8);
    int divides = 0;
    REQUIRE(zmc_conjecture_check(f.p, 2, -1, &divides, &h.p) == ZMC_OK);
    CHECK(divides == 1);
    CHECK(render(h.p) == "-16");
    REQUIRE(zmc_residual(f.p, 2, -1, &g.p) == ZMC_OK);
    CHECK(zmc_poly_degree(g.p) == 2);

    Poly x, hx;
    REQUIRE(zmc_poly_parse("x1^2 + 2 x2^2 - x3^2", 3, &x.p) == ZMC_OK);
    REQUIRE(zmc_conjecture_check(x.p, 2, -1, &divides, &hx.p) == ZMC_OK);
    CHECK(divides == 0);
    CHECK(hx.p == nullptr);
    CHECK(zmc_residual(x.p, 3, -1, &g.p) != ZMC_OK);
  }
}

TEST_SUITE("c api: jobs") {
  TEST_CASE("verify job") {
    Job job;
    REQUIRE(zmc_job_set_command(job.j, ZMC_CMD_VERIFY) == ZMC_OK);
    REQUIRE(zmc_job_add_family(job.j, "ads:2,3,1") == ZMC_OK);
    const RunOutput out = run(job.j);
    REQUIRE(out.status == ZMC_OK);
    CHECK(out.verdict == 0);
    CHECK(out.json.find("\"h\": \"-16\"") != std::string::npos);
  }

  TEST_CASE("failing polynomial") {
    Job job;
    REQUIRE(zmc_job_set_command(job.j, ZMC_CMD_VERIFY) == ZMC_OK);
    REQUIRE(zmc_job_set_poly(job.j, "x1^2+x2^2-x3^2", 3) == ZMC_OK);
    REQUIRE(zmc_job_set_sig(job.j, 2, -1) == ZMC_OK);
    const RunOutput out = run(job.j);
    REQUIRE(out.status == ZMC_OK);
    CHECK(out.verdict == 1);
  }

  TEST_CASE("configuration errors") {
    Job job;
    CHECK(zmc_job_set_command(job.j, static_cast<zmc_command>(42)) == ZMC_ERR_ARGUMENT);
    CHECK(zmc_job_set_count(job.j, 0) == ZMC_ERR_ARGUMENT);
    CHECK(zmc_job_set_tolerance(job.j, ZMC_TOL_RESIDUAL, -1.0) == ZMC_ERR_ARGUMENT);
    CHECK(zmc_job_set_command(nullptr, ZMC_CMD_VERIFY) == ZMC_ERR_ARGUMENT);
    REQUIRE(zmc_job_set_command(job.j, ZMC_CMD_REPORT) == ZMC_OK);
    const RunOutput empty = run(job.j);
    CHECK(empty.status == ZMC_ERR_ARGUMENT);
    CHECK(std::string(zmc_last_error()).find("famil") != std::string::npos);
  }

  TEST_CASE("spectrum job with points and csv") {
    Job job;
    REQUIRE(zmc_job_set_command(job.j, ZMC_CMD_SPECTRUM) == ZMC_OK);
    REQUIRE(zmc_job_add_family(job.j, "ads:1,1,0") == ZMC_OK);
    REQUIRE(zmc_job_set_points(job.j, R"([{"coords": [1, 0, 0, 0]}])") == ZMC_OK);
    const RunOutput out = run(job.j);
    REQUIRE(out.status == ZMC_OK);
    CHECK(out.verdict == 0);
    CHECK(out.csv.rfind("x1,x2,x3,x4,", 0) == 0);
  }

  TEST_CASE("seeded runs are byte identical") {
    std::vector<std::string> docs;
    for (int threads : {1, 3}) {
      Job job;
      REQUIRE(zmc_job_set_command(job.j, ZMC_CMD_SPECTRUM) == ZMC_OK);
      REQUIRE(zmc_job_add_family(job.j, "ds1:1,2") == ZMC_OK);
      REQUIRE(zmc_job_set_count(job.j, 12) == ZMC_OK);
      REQUIRE(zmc_job_set_seed(job.j, 99) == ZMC_OK);
      REQUIRE(zmc_job_set_threads(job.j, threads) == ZMC_OK);
      const RunOutput out = run(job.j);
      REQUIRE(out.status == ZMC_OK);
      docs.push_back(out.json);
    }
    CHECK(docs[0] == docs[1]);
  }
}
