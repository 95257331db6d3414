#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "belldim/bounds.hpp"
#include "belldim/correlation_io.hpp"
#include "belldim/ensemble.hpp"
#include "belldim/generators.hpp"
#include "belldim/quantum.hpp"
#include "belldim/report_io.hpp"
#include "belldim/scenario_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitParse = 2;

using belldim::AmsOptions;
using belldim::OrderingStrategy;

AmsOptions parse_ordering(const std::string& text, int bob_count, double inf_threshold) {
  AmsOptions opts;
  opts.inf_threshold = inf_threshold;
  if (text.empty()) {
    opts = AmsOptions::auto_for(bob_count);
    opts.inf_threshold = inf_threshold;
    if (bob_count > 5)
      std::cerr << "warning: " << bob_count
                << " Bobs make exhaustive ordering too large; using the fixed"
                   " identity ordering\n";
    return opts;
  }
  if (text == "per-term") {
    opts.strategy = OrderingStrategy::kExhaustivePerTerm;
  } else if (text == "global") {
    opts.strategy = OrderingStrategy::kExhaustiveGlobal;
  } else if (text == "fixed" || text.rfind("fixed:", 0) == 0) {
    opts.strategy = OrderingStrategy::kFixed;
    if (text.size() > 6) {
      std::stringstream ss(text.substr(6));
      std::string item;
      while (std::getline(ss, item, ','))
        opts.fixed_order.push_back(std::stoi(item));
    }
  } else {
    throw CLI::ValidationError("--ordering", "expected per-term, global, or fixed[:i,j,...]");
  }
  return opts;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw belldim::ParseError("cannot open " + out_path + " for writing");
  out << text;
}

// Table output truncates rather than rounds to three decimals.
std::string trunc3(double v) {
  double t = std::floor(v * 1000.0 + 1e-9) / 1000.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", t);
  return buf;
}

struct TableRow {
  int table = 0;
  std::string state;
  int d = 0;
  int trials = 0;
  belldim::EnsembleResult res;
};

std::string render_table_csv(const std::vector<TableRow>& rows, bool grouped) {
  std::ostringstream out;
  out << "table,state,d,trials,mean_exact,mean_rounded";
  if (grouped)
    out << ",grouped_mean_exact,grouped_mean_rounded,outperform_exact,outperform_rounded";
  out << "\n";
  for (const auto& r : rows) {
    out << r.table << "," << r.state << "," << r.d << "," << r.trials << ","
        << trunc3(r.res.mean_exact) << "," << trunc3(r.res.mean_rounded);
    if (grouped)
      out << "," << trunc3(r.res.mean_grouped_exact) << ","
          << trunc3(r.res.mean_grouped_rounded) << "," << r.res.outperform_exact << ","
          << r.res.outperform_rounded;
    out << "\n";
  }
  return out.str();
}

std::string render_table_text(const std::vector<TableRow>& rows, bool grouped) {
  std::ostringstream out;
  char buf[160];
  if (grouped) {
    out << "  d   trials   mean exact   mean rounded   grouped exact   grouped rounded"
           "   outperform(>=0.001)   outperform(rounded)\n";
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof(buf), "%3d   %6d   %10s   %12s   %13s   %15s   %19d   %19d\n",
                    r.d, r.trials, trunc3(r.res.mean_exact).c_str(),
                    trunc3(r.res.mean_rounded).c_str(),
                    trunc3(r.res.mean_grouped_exact).c_str(),
                    trunc3(r.res.mean_grouped_rounded).c_str(), r.res.outperform_exact,
                    r.res.outperform_rounded);
      out << buf;
    }
  } else {
    out << "  d   trials   mean exact   mean rounded\n";
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof(buf), "%3d   %6d   %10s   %12s\n", r.d, r.trials,
                    trunc3(r.res.mean_exact).c_str(), trunc3(r.res.mean_rounded).c_str());
      out << buf;
    }
  }
  return out.str();
}

std::string render_table_json(const std::vector<TableRow>& rows, bool grouped) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row;
    row["table"] = r.table;
    row["state"] = r.state;
    row["d"] = r.d;
    row["trials"] = r.trials;
    row["mean_exact"] = trunc3(r.res.mean_exact);
    row["mean_rounded"] = trunc3(r.res.mean_rounded);
    if (grouped) {
      row["grouped_mean_exact"] = trunc3(r.res.mean_grouped_exact);
      row["grouped_mean_rounded"] = trunc3(r.res.mean_grouped_rounded);
      row["outperform_exact"] = r.res.outperform_exact;
      row["outperform_rounded"] = r.res.outperform_rounded;
    }
    doc.push_back(row);
  }
  return doc.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "belldim: device-independent dimension bounds for multiparty Bell"
      " correlations.\nWorker count for ensembles comes from BELLDIM_WORKERS"
      " (default: hardware concurrency)."};
  app.require_subcommand(1);

  // validate
  std::string v_file, v_format = "table";
  double v_norm_tol = belldim::kDefaultNormTol, v_ns_tol = belldim::kDefaultNsTol;
  auto* validate_cmd = app.add_subcommand("validate", "Check a correlation file");
  validate_cmd->add_option("file", v_file, "correlation file")->required();
  validate_cmd->add_option("--norm-tol", v_norm_tol, "normalization tolerance");
  validate_cmd->add_option("--ns-tol", v_ns_tol, "no-signalling tolerance");
  validate_cmd->add_option("--format", v_format)->check(CLI::IsMember({"json", "table"}));

  // bound
  std::string b_file, b_format = "table", b_ordering, b_out;
  int b_party = 0;
  double b_norm_tol = belldim::kDefaultNormTol, b_inf_threshold = 0.0;
  bool b_grouped = false;
  auto* bound_cmd = app.add_subcommand("bound", "Dimension lower bound from a correlation file");
  bound_cmd->add_option("file", b_file, "correlation file")->required();
  bound_cmd->add_option("--party", b_party, "party whose dimension is bounded");
  bound_cmd->add_option("--ordering", b_ordering, "per-term | global | fixed[:i,j,...]");
  bound_cmd->add_option("--inf-threshold", b_inf_threshold,
                        "denominators below this count as zero");
  bound_cmd->add_option("--norm-tol", b_norm_tol, "normalization tolerance");
  bound_cmd->add_flag("--grouped", b_grouped, "also print the bipartite grouped bound");
  bound_cmd->add_option("--format", b_format)->check(CLI::IsMember({"json", "table"}));
  bound_cmd->add_option("--out", b_out, "write the report here instead of stdout");

  // generate
  std::string g_family, g_out;
  int g_parties = 3, g_d = 2;
  auto* generate_cmd = app.add_subcommand("generate", "Emit a closed-form correlation");
  generate_cmd->add_option("family", g_family, "ghz | prbox | eq19 | maxent-cb")->required();
  generate_cmd->add_option("--parties", g_parties, "party count");
  generate_cmd->add_option("--d", g_d, "local dimension (maxent-cb)");
  generate_cmd->add_option("--out", g_out, "output file (default stdout)");

  // simulate
  std::string s_file, s_out;
  auto* simulate_cmd = app.add_subcommand("simulate", "Born-rule correlation from a scenario file");
  simulate_cmd->add_option("file", s_file, "scenario file")->required();
  simulate_cmd->add_option("--out", s_out, "output file (default stdout)");

  // table
  int t_id = 1, t_dmin = 2, t_dmax = 4, t_trials = 100;
  std::uint64_t t_seed = 0;
  std::string t_format = "table", t_out;
  auto* table_cmd = app.add_subcommand("table", "Random-ensemble bound statistics");
  table_cmd->add_option("id", t_id, "1 maxent | 2 weighted | 3 classical | 4 dicke3 | 5 maxent+grouped")
      ->required()
      ->check(CLI::Range(1, 5));
  table_cmd->add_option("--dmin", t_dmin, "smallest local dimension");
  table_cmd->add_option("--dmax", t_dmax, "largest local dimension");
  table_cmd->add_option("--trials", t_trials, "trials per dimension")->check(CLI::PositiveNumber);
  table_cmd->add_option("--seed", t_seed, "root seed");
  table_cmd->add_option("--format", t_format)->check(CLI::IsMember({"csv", "json", "table"}));
  table_cmd->add_option("--out", t_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*validate_cmd) {
      belldim::Correlation c = belldim::read_correlation(v_file);
      belldim::ValidationReport norm = belldim::validate(c, v_norm_tol);
      belldim::ValidationReport ns = belldim::check_no_signalling(c, v_ns_tol);
      norm.worst_no_signalling = ns.worst_no_signalling;
      norm.ok = norm.ok && ns.ok;
      std::cout << (v_format == "json" ? belldim::validation_report_json(norm)
                                       : belldim::validation_report_text(norm));
      return norm.ok ? kExitOk : kExitValidation;
    }

    if (*bound_cmd) {
      belldim::Correlation c = belldim::read_correlation(b_file);
      belldim::ValidationReport vr = belldim::validate(c, b_norm_tol);
      if (!vr.ok) {
        std::cerr << belldim::validation_report_text(vr);
        return kExitValidation;
      }
      int bobs = c.parties() - 1;
      AmsOptions opts = parse_ordering(b_ordering, bobs, b_inf_threshold);
      belldim::BoundReport report = belldim::dimension_bound(c, b_party, opts);
      std::ostringstream text;
      if (b_format == "json") {
        text << belldim::bound_report_json(report);
        if (b_grouped)
          text << belldim::bound_report_json(
              belldim::dimension_bound_grouped(c, b_party, b_inf_threshold));
      } else {
        text << belldim::bound_report_text(report);
        if (b_grouped)
          text << belldim::bound_report_text(
              belldim::dimension_bound_grouped(c, b_party, b_inf_threshold));
      }
      emit(text.str(), b_out);
      return kExitOk;
    }

    if (*generate_cmd) {
      belldim::GeneratorSpec spec = belldim::parse_generator_spec(g_family, g_parties, g_d);
      belldim::Correlation c = belldim::generate(spec);
      std::ostringstream text;
      belldim::write_correlation(c, text);
      emit(text.str(), g_out);
      return kExitOk;
    }

    if (*simulate_cmd) {
      belldim::QuantumScenario scenario = belldim::read_scenario(s_file);
      belldim::Correlation c = belldim::born_correlation(scenario);
      std::ostringstream text;
      belldim::write_correlation(c, text);
      emit(text.str(), s_out);
      return kExitOk;
    }

    if (*table_cmd) {
      static const char* kStates[6] = {"", "maxent", "weighted", "classical", "dicke3", "maxent"};
      bool grouped = t_id == 5;
      std::vector<TableRow> rows;
      int dmin = t_id == 4 ? 3 : t_dmin;
      int dmax = t_id == 4 ? 3 : t_dmax;
      for (int d = dmin; d <= dmax; ++d) {
        belldim::EnsembleOptions eo;
        eo.state = kStates[t_id];
        eo.d = d;
        eo.parties = 3;
        eo.trials = t_trials;
        eo.seed = t_seed;
        eo.with_grouped = grouped;
        rows.push_back(TableRow{t_id, eo.state, d, t_trials, belldim::ensemble_run(eo)});
      }
      std::string text = t_format == "csv"    ? render_table_csv(rows, grouped)
                         : t_format == "json" ? render_table_json(rows, grouped)
                                              : render_table_text(rows, grouped);
      emit(text, t_out);
      return kExitOk;
    }
  } catch (const belldim::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitOk;
}
