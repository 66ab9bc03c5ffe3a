#include "totalk/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "totalk/errors.hpp"
#include "totalk/io.hpp"

namespace totalk {

namespace {

constexpr int kPass = 0;
constexpr int kFailed = 1;
constexpr int kInput = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Total K-theory invariants: exact computation and verification", "totalk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "totalk 1.0");

  std::string format = "text";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };

  std::string snf_path;
  auto* snf = app.add_subcommand("snf", "Smith normal form of an integer matrix file");
  snf->add_option("file", snf_path, "Matrix as whitespace-separated rows or a JSON array of rows")->required();
  add_format(snf);

  std::string check_path;
  auto* check = app.add_subcommand("check", "Run the assertions of a JSON input document");
  check->add_option("file", check_path, "Input document")->required();
  add_format(check);
  bool canonical = false;
  check->add_flag("--canonical", canonical, "Print the canonical form of the document instead of running it");

  auto* paper = app.add_subcommand("paper", "Built-in verification suite");
  paper->require_subcommand(1);
  auto* verify = paper->add_subcommand("verify", "Verify the constructions and counterexamples");
  std::string which = "all";
  long max_coeff = 24;
  long window = 12;
  bool timing = false;
  std::vector<std::string> cases = check_names();
  cases.push_back("all");
  verify->add_option("--case", which, "Check to run")->check(CLI::IsMember(cases));
  verify->add_option("--max-coeff", max_coeff, "Largest coefficient level")
      ->envname("MAX_COEFF")
      ->check(CLI::Range(9L, 48L));
  verify->add_option("--window", window, "Probe window for non-finitely generated groups")
      ->envname("WINDOW")
      ->check(CLI::Range(3L, 200L));
  verify->add_flag("--timing", timing, "Include elapsed times");
  add_format(verify);

  auto* fixture = app.add_subcommand("fixture", "Inspect built-in fixtures");
  fixture->require_subcommand(1);
  auto* dump = fixture->add_subcommand("dump", "Print the levels and maps of a fixture");
  std::string fixture_name;
  long fixture_bound = 24;
  dump->add_option("name", fixture_name, "Fixture name")->required()->check(CLI::IsMember(fixture_names()));
  dump->add_option("--max-coeff", fixture_bound, "Largest coefficient level")
      ->envname("MAX_COEFF")
      ->check(CLI::Range(1L, 48L));
  add_format(dump);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInput;
  }

  try {
    if (snf->parsed()) {
      out << emit_snf(parse_matrix_text(read_file(snf_path)), format);
      return kPass;
    }
    if (check->parsed()) {
      InputDocument doc = parse_input(read_file(check_path));
      if (canonical) {
        out << serialize(doc);
        return kPass;
      }
      auto results = run_assertions(doc);
      out << emit_assertions(results, format);
      for (const auto& r : results)
        if (!r.pass) return kFailed;
      return kPass;
    }
    if (verify->parsed()) {
      VerifyConfig cfg;
      cfg.max_coeff = max_coeff;
      cfg.window = window;
      if (which != "all") cfg.checks = {which};
      auto reports = run_all(cfg);
      ReportOptions opts;
      opts.format = format;
      opts.timing = timing;
      opts.max_coeff = max_coeff;
      opts.window = window;
      out << emit_report(reports, opts);
      for (const auto& r : reports)
        if (!r.pass) return kFailed;
      return kPass;
    }
    if (dump->parsed()) {
      out << dump_fixture(load_fixture(fixture_name, fixture_bound), format);
      return kPass;
    }
  } catch (const ParseError& e) {
    err << "error: parse: " << e.what() << "\n";
    return kInput;
  } catch (const SemanticError& e) {
    err << "error: semantic: " << e.what() << "\n";
    return kInput;
  } catch (const IllDefined& e) {
    err << "verification failed: " << e.what() << "\n";
    return kFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}

}  // namespace totalk
