#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "sostensor/generators.hpp"
#include "sostensor/report.hpp"
#include "sostensor/repro.hpp"
#include "sostensor/sostensor.h"

using namespace sostensor;
namespace fs = std::filesystem;

namespace {

const Json& find_class(const Json& report, const std::string& name) {
  for (const auto& c : report["classes"])
    if (c["name"] == name) return c;
  throw std::runtime_error("class not in report: " + name);
}

// Owns a C string returned by the library.
struct CString {
  char* p = nullptr;
  ~CString() { sost_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct Handle {
  sost_tensor* t = nullptr;
  ~Handle() { sost_tensor_free(t); }
};

fs::path scratch_dir() {
  fs::path d = fs::temp_directory_path() / ("sostensor_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args, const fs::path& out) {
  std::string cmd = std::string(SOSTENSOR_CLI) + " " + args + " > " + out.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(ClassificationReport, Example51) {
  auto r = classification_report(example51().cast<double>());
  EXPECT_EQ(r["order"], 6);
  EXPECT_EQ(r["dim"], 4);
  EXPECT_TRUE(find_class(r, "extended_z")["holds"].get<bool>());
  EXPECT_FALSE(find_class(r, "z_tensor")["holds"].get<bool>());
  auto w = find_class(r, "z_tensor")["witness"];
  EXPECT_FALSE(w.is_null());
  const auto& blocks = find_class(r, "extended_z")["witness"]["blocks"];
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0]["vars"], Json::array({1, 2}));
}

TEST(ClassificationReport, IdentityAndAllOne) {
  auto r = classification_report(identity_tensor<double>(4, 3));
  EXPECT_TRUE(find_class(r, "diagonally_dominated")["holds"].get<bool>());
  EXPECT_TRUE(find_class(r, "h_tensor")["holds"].get<bool>());
  EXPECT_FALSE(find_class(r, "cauchy")["holds"].get<bool>());

  auto ones = classification_report(all_one_tensor<double>(4, 3));
  EXPECT_TRUE(find_class(ones, "b0")["holds"].get<bool>());
  EXPECT_TRUE(find_class(ones, "cauchy")["holds"].get<bool>());
  EXPECT_FALSE(find_class(ones, "h_tensor")["holds"].get<bool>());
}

TEST(ClassificationReport, OddOrderIsPerClass) {
  SymmetricTensor a(3, 2);
  a.set({0, 0, 0}, 1.0);
  auto r = classification_report(a);
  EXPECT_TRUE(find_class(r, "z_tensor")["holds"].is_boolean());
  const auto& dd = find_class(r, "diagonally_dominated");
  EXPECT_TRUE(dd["holds"].is_null());
  EXPECT_TRUE(dd.contains("error"));
}

TEST(RenderText, MirrorsJson) {
  Json doc = {{"status", "certified"}, {"rank", 3}, {"vars", {1, 2}}, {"nested", {{"a", 1.5}}}};
  std::string text = render_text(doc);
  EXPECT_NE(text.find("status: certified"), std::string::npos);
  EXPECT_NE(text.find("rank: 3"), std::string::npos);
  EXPECT_NE(text.find("vars: [1, 2]"), std::string::npos);
  EXPECT_NE(text.find("  a: 1.5"), std::string::npos);

  auto report = classification_report(example54(4).cast<double>());
  std::string t = render_text(report);
  for (const auto& c : report["classes"])
    EXPECT_NE(t.find("name: " + c["name"].get<std::string>()), std::string::npos);
}

TEST(SosReport, CertificateDocument) {
  auto a = identity_tensor<double>(4, 3);
  auto r = certify_sos(a);
  ASSERT_TRUE(r.certificate.has_value());
  auto doc = sos_report(a, r);
  EXPECT_EQ(doc["status"], "certified");
  EXPECT_EQ(doc["rank_estimate"], 3);
  auto cert = certificate_document(*r.certificate);
  EXPECT_EQ(cert["blocks"].size(), 3u);
  EXPECT_EQ(cert["blocks"][0]["vars"], Json::array({1}));
}

TEST(CApi, ParseAndWrite) {
  Handle h;
  ASSERT_EQ(sost_tensor_parse("tensor 4 2\n1 1 1 1 1\n2 2 2 2 1\n1 1 2 2 -1/3\n", &h.t), SOST_OK);
  EXPECT_EQ(sost_tensor_order(h.t), 4);
  EXPECT_EQ(sost_tensor_dim(h.t), 2);
  CString s;
  ASSERT_EQ(sost_tensor_write(h.t, &s.p), SOST_OK);
  Handle again;
  ASSERT_EQ(sost_tensor_parse(s.p, &again.t), SOST_OK);
  CString s2;
  ASSERT_EQ(sost_tensor_write(again.t, &s2.p), SOST_OK);
  EXPECT_EQ(s.str(), s2.str());
}

TEST(CApi, ErrorCodes) {
  Handle h;
  EXPECT_EQ(sost_tensor_parse("tensor 4 2\n1 1 1\n", &h.t), SOST_ERR_PARSE);
  EXPECT_EQ(h.t, nullptr);
  EXPECT_NE(std::string(sost_last_error()).find("line 2"), std::string::npos);
  EXPECT_EQ(sost_tensor_load("/nonexistent/tensor.txt", &h.t), SOST_ERR_PARSE);
  EXPECT_EQ(sost_generate("no_such_kind(1)", 1, &h.t), SOST_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(sost_tensor_parse(nullptr, &h.t), SOST_ERR_INVALID_ARGUMENT);

  Handle odd;
  ASSERT_EQ(sost_tensor_parse("tensor 3 2\n1 1 1 1\n", &odd.t), SOST_OK);
  sost_options o;
  sost_options_default(&o);
  CString rep;
  int outcome = -1;
  EXPECT_EQ(sost_sos(odd.t, &o, &rep.p, nullptr, &outcome), SOST_ERR_ODD_ORDER);
  EXPECT_EQ(sost_pd(odd.t, &o, &rep.p, &outcome), SOST_ERR_ODD_ORDER);
  // classification still works per class
  CString cls;
  EXPECT_EQ(sost_classify(odd.t, &o, &cls.p), SOST_OK);
  EXPECT_EQ(sost_repro("unknown", &o, &rep.p, &outcome), SOST_ERR_INVALID_ARGUMENT);
}

TEST(CApi, Commands) {
  sost_options o;
  sost_options_default(&o);
  o.format = SOST_FORMAT_JSON;
  Handle h;
  ASSERT_EQ(sost_generate("example51", 1, &h.t), SOST_OK);

  CString rep, cert;
  int outcome = -1;
  ASSERT_EQ(sost_sos(h.t, &o, &rep.p, &cert.p, &outcome), SOST_OK);
  EXPECT_EQ(outcome, SOST_OUTCOME_NO);
  EXPECT_EQ(cert.p, nullptr);
  EXPECT_EQ(Json::parse(rep.str())["status"], "infeasible");

  CString eig;
  ASSERT_EQ(sost_eigmin(h.t, &o, &eig.p, &outcome), SOST_OK);
  EXPECT_EQ(outcome, SOST_OUTCOME_YES);
  auto e = Json::parse(eig.str());
  EXPECT_NEAR(e["lambda_min"].get<double>(), -1.0, 1e-6);
  EXPECT_NEAR(e["oracle"]["value"].get<double>(), -1.0, 1e-6);

  CString pd;
  ASSERT_EQ(sost_pd(h.t, &o, &pd.p, &outcome), SOST_OK);
  EXPECT_EQ(outcome, SOST_OUTCOME_NO);

  Handle id;
  ASSERT_EQ(sost_generate("identity(4,3)", 1, &id.t), SOST_OK);
  CString rep2, cert2;
  ASSERT_EQ(sost_sos(id.t, &o, &rep2.p, &cert2.p, &outcome), SOST_OK);
  EXPECT_EQ(outcome, SOST_OUTCOME_YES);
  ASSERT_NE(cert2.p, nullptr);
  EXPECT_EQ(Json::parse(cert2.str())["rank_estimate"], 3);

  o.format = SOST_FORMAT_TEXT;
  CString text;
  ASSERT_EQ(sost_classify(id.t, &o, &text.p), SOST_OK);
  EXPECT_NE(text.str().find("name: h_tensor"), std::string::npos);
}

TEST(CApi, GeneratorsAreSeeded) {
  Handle a, b, c;
  ASSERT_EQ(sost_generate("procedure1(4,8,2,4,100)", 5, &a.t), SOST_OK);
  ASSERT_EQ(sost_generate("procedure1(4,8,2,4,100)", 5, &b.t), SOST_OK);
  ASSERT_EQ(sost_generate("random_class(mb0,4,3)", 5, &c.t), SOST_OK);
  CString sa, sb;
  sost_tensor_write(a.t, &sa.p);
  sost_tensor_write(b.t, &sb.p);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sost_tensor_dim(c.t), 3);
}

TEST(Repro, PdTestDeterministic) {
  ReproOptions o;
  o.pd_instances = 4;
  o.pd_dim = 8;
  o.pd_blocks = 2;
  o.pd_block_size = 4;
  auto a = repro_pd_test(o);
  auto b = repro_pd_test(o);
  EXPECT_EQ(a["instances"], 4);
  EXPECT_EQ(a["correct"], 4);
  ASSERT_EQ(a["rows"].size(), b["rows"].size());
  for (std::size_t k = 0; k < a["rows"].size(); ++k) {
    EXPECT_EQ(a["rows"][k]["L"], b["rows"][k]["L"]);
    EXPECT_EQ(a["rows"][k]["verdict"], b["rows"][k]["verdict"]);
  }
  EXPECT_THROW(run_repro("nope"), std::invalid_argument);
}

TEST(Cli, ExitCodesAndOutput) {
  fs::path d = scratch_dir();
  fs::path out = d / "out.txt";
  fs::path id = d / "id.txt";
  ASSERT_EQ(run_cli("gen identity 4 3", id), 0);
  EXPECT_NE(slurp(id).find("tensor 4 3"), std::string::npos);

  EXPECT_EQ(run_cli("classify " + id.string(), out), 0);
  EXPECT_NE(slurp(out).find("name: diagonally_dominated"), std::string::npos);

  EXPECT_EQ(run_cli("--format json classify " + id.string(), out), 0);
  EXPECT_NO_THROW(Json::parse(slurp(out)));

  fs::path cert = d / "cert.json";
  EXPECT_EQ(run_cli("sos " + id.string() + " --out " + cert.string(), out), 0);
  EXPECT_EQ(Json::parse(slurp(cert))["rank_estimate"], 3);

  EXPECT_EQ(run_cli("pd " + id.string(), out), 0);
  EXPECT_NE(slurp(out).find("verdict: positive_definite"), std::string::npos);

  EXPECT_EQ(run_cli("classify " + (d / "missing.txt").string(), out), 64);
  EXPECT_EQ(run_cli("gen no_such_kind", out), 64);
  EXPECT_EQ(run_cli("", out), 64);
  EXPECT_EQ(run_cli("--tol -1 classify " + id.string(), out), 64);

  fs::path odd = d / "odd.txt";
  std::ofstream(odd) << "tensor 3 2\n1 1 1 1\n";
  EXPECT_EQ(run_cli("sos " + odd.string(), out), 64);
  fs::remove_all(d);
}
