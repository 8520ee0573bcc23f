#include <exception>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "fg/error.hpp"

namespace {

void error_line(const std::string& code, const std::string& message) {
  std::cerr << nlohmann::json{{"error", code}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fg::cli;
  CLI::App app{"fg: multi-satellite deforestation mapping"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fg 1.0.0");

  CatalogArgs cat;
  auto* c = app.add_subcommand("catalog", "Index a directory of band and label TIFFs");
  c->add_option("--data-dir", cat.data_dir, "Root of the tile tree")->required();
  c->add_option("--out", cat.out, "Catalog JSON to write")->required();
  c->add_option("--config", cat.config, "Run configuration JSON");

  PreprocessArgs pre;
  auto* p = app.add_subcommand("preprocess", "Assemble normalized 256x256 stacks for every complete acquisition");
  p->add_option("--catalog", pre.catalog)->required();
  p->add_option("--config", pre.config);
  p->add_option("--out-dir", pre.out_dir)->required();
  p->add_option("--parallelism", pre.parallelism)->check(CLI::NonNegativeNumber);

  PredictArgs pred;
  auto* r = app.add_subcommand("predict", "Produce per-acquisition probability masks");
  r->add_option("--method", pred.method)->check(CLI::IsMember({"index", "import"}));
  auto* stacks = r->add_option("--stacks", pred.stacks, "Stack directory (index method)");
  auto* masks_dir = r->add_option("--masks-dir", pred.masks_dir, "FGPM directory (import method)");
  r->add_option("--config", pred.config);
  r->add_option("--out-dir", pred.out_dir)->required();
  r->add_option("--parallelism", pred.parallelism)->check(CLI::NonNegativeNumber);

  FuseArgs fuse;
  auto* f = app.add_subcommand("fuse", "Filter and fuse predictions per query");
  f->add_option("--masks", fuse.masks)->required();
  f->add_option("--queries", fuse.queries, "CSV with header lat,lon,year,month")->required();
  f->add_option("--config", fuse.config);
  f->add_option("--out-dir", fuse.out_dir)->required();
  f->add_option("--parallelism", fuse.parallelism)->check(CLI::NonNegativeNumber);

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Score fused maps against ground truth");
  e->add_option("--pred", ev.pred)->required();
  e->add_option("--truth", ev.truth)->required();
  e->add_option("--out", ev.out)->required();

  SynthArgs syn;
  auto* s = app.add_subcommand("synth", "Generate a synthetic corpus");
  s->add_option("--scenes", syn.scenes)->required()->check(CLI::PositiveNumber);
  s->add_option("--seed", syn.seed);
  s->add_option("--out-dir", syn.out_dir)->required();
  s->add_option("--months", syn.months, "YYYY-MM[,YYYY-MM...] for every scene");
  s->add_option("--noise", syn.noise)->check(CLI::NonNegativeNumber);
  s->add_option("--outlier-rate", syn.outlier_rate)->check(CLI::Range(0.0, 1.0));
  s->add_option("--s1-dates", syn.s1_dates)->check(CLI::NonNegativeNumber);
  s->add_option("--s2-dates", syn.s2_dates)->check(CLI::NonNegativeNumber);
  s->add_option("--l8-dates", syn.l8_dates)->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForVersion& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    error_line("usage", ex.what());
    return kExitFatal;
  }

  try {
    if (c->parsed()) return run_catalog(cat);
    if (p->parsed()) return run_preprocess(pre);
    if (r->parsed()) {
      if (pred.method == "index" && stacks->count() == 0) throw CLI::RequiredError("--stacks");
      if (pred.method == "import" && masks_dir->count() == 0) throw CLI::RequiredError("--masks-dir");
      return run_predict(pred);
    }
    if (f->parsed()) return run_fuse(fuse);
    if (e->parsed()) return run_evaluate(ev);
    if (s->parsed()) return run_synth(syn);
  } catch (const fg::Error& ex) {
    error_line(std::string(fg::errc_name(ex.code())), ex.what());
    return kExitFatal;
  } catch (const CLI::Error& ex) {
    error_line("usage", ex.what());
    return kExitFatal;
  } catch (const std::exception& ex) {
    error_line("internal", ex.what());
    return kExitFatal;
  }
  return kExitFatal;
}
