// Batch front end: annotate, eval, check, split.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spatial/annotator.hpp"
#include "spatial/error.hpp"
#include "spatial/eval.hpp"
#include "spatial/spatial_grammar.hpp"

namespace fs = std::filesystem;
using namespace spatial;

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kMismatch = 3 };

struct RunConfig {
  std::vector<fs::path> lexicons;
  std::vector<fs::path> rules;
  std::optional<fs::path> variants;
  std::string mode = "trigger-exact";
  fs::path out;
  std::uint64_t seed = 0;
};

const fs::path kResourceDir = SPATIAL_DEFAULT_RESOURCE_DIR;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes to a sibling temporary file and renames it over the target, so a
// failure never leaves a partially written file behind.
void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("failed writing " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

// Loaded, validated resources of one run.
struct Resources {
  VariantTable variants;
  Lexicon lexicon;
  CompiledGrammar grammar;
};

void apply_defaults(RunConfig& cfg) {
  if (cfg.lexicons.empty()) cfg.lexicons.push_back(kResourceDir / "lexicon.tsv");
  if (cfg.rules.empty()) cfg.rules.push_back(kResourceDir / "rules.dsl");
  if (!cfg.variants) cfg.variants = kResourceDir / "variants.tsv";
}

void require_file(const fs::path& p, std::string_view what) {
  if (!fs::is_regular_file(p)) throw ValidationError(std::string(what) + " file not found: " + p.string());
}

CompiledGrammar load_rules(const std::vector<fs::path>& paths, const Lexicon& lexicon) {
  std::vector<Rule> all;
  for (const auto& p : paths) {
    require_file(p, "rule pack");
    auto g = compile_rules(read_text(p), lexicon, default_map(), p.string());
    for (const auto& r : g.rules()) {
      const bool dup = std::any_of(all.begin(), all.end(), [&](const Rule& o) { return o.name == r.name; });
      if (dup) throw ValidationError(p.string() + ":" + std::to_string(r.line) + ": rule '" + r.name + "' is already defined in an earlier rule pack");
      all.push_back(r);
    }
  }
  return CompiledGrammar(std::move(all));
}

Resources load_resources(RunConfig cfg) {
  apply_defaults(cfg);
  Resources res;
  require_file(*cfg.variants, "variant table");
  res.variants = VariantTable::load(*cfg.variants);
  for (const auto& p : cfg.lexicons) require_file(p, "lexicon");
  res.lexicon = Lexicon::load(cfg.lexicons, default_map());
  res.grammar = load_rules(cfg.rules, res.lexicon);
  return res;
}

void add_resource_flags(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--lexicon", cfg.lexicons, "Lexicon TSV (repeatable; default: shipped lexicon)");
  cmd.add_option("--rules", cfg.rules, "Rule pack (repeatable; default: shipped rules)");
  cmd.add_option("--variants", cfg.variants, "Variant table TSV (default: shipped table)");
}

int cmd_annotate(const RunConfig& cfg, const std::vector<fs::path>& inputs) {
  const Resources res = load_resources(cfg);
  std::vector<std::pair<fs::path, std::string>> docs;
  for (const auto& p : inputs) docs.emplace_back(p, read_text(p));
  fs::create_directories(cfg.out);
  const Annotator annotator(res.lexicon, res.grammar, default_map(), res.variants);
  for (const auto& [path, text] : docs) {
    const auto doc = annotator.annotate(text, path.stem().string());
    write_atomic(cfg.out / (doc.doc_id + ".json"), to_json(doc));
  }
  std::cerr << "annotated " << docs.size() << " document(s) into " << cfg.out.string() << "\n";
  return kOk;
}

std::vector<AnnotatedDocument> read_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ValidationError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<AnnotatedDocument> docs;
  for (const auto& f : files) docs.push_back(read_annotations(f, default_map()));
  return docs;
}

int cmd_eval(const RunConfig& cfg, const fs::path& gold_dir, const fs::path& system_dir) {
  const auto mode = parse_match_mode(cfg.mode);
  if (!mode) {
    std::cerr << "error: unknown --mode '" << cfg.mode << "' (expected trigger-exact or span-overlap)\n";
    return kUsage;
  }
  const auto gold = read_dir(gold_dir);
  const auto system = read_dir(system_dir);
  const auto report = score(gold, system, *mode);
  std::cout << format_table(report);
  const auto errors = error_report(report);
  if (!errors.empty()) std::cout << "\n" << format_errors(errors);
  if (!cfg.out.empty()) write_atomic(cfg.out, report_json(report));
  return kOk;
}

int cmd_check(RunConfig cfg) {
  apply_defaults(cfg);
  int problems = 0;
  const auto report = [&problems](const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    ++problems;
  };
  try {
    require_file(*cfg.variants, "variant table");
    const auto v = VariantTable::load(*cfg.variants);
    std::cout << "variants: " << v.size() << " mapping(s) ok\n";
  } catch (const Error& e) {
    report(e);
  }
  std::optional<Lexicon> lexicon;
  try {
    for (const auto& p : cfg.lexicons) require_file(p, "lexicon");
    lexicon = Lexicon::load(cfg.lexicons, default_map());
    std::cout << "lexicon: " << lexicon->entries().size() << " entries ok\n";
  } catch (const Error& e) {
    report(e);
  }
  if (lexicon) {
    try {
      const auto g = load_rules(cfg.rules, *lexicon);
      std::cout << "rules: " << g.size() << " rule(s) ok\n";
    } catch (const Error& e) {
      report(e);
    }
  } else {
    std::cerr << "rules: skipped (lexicon did not load)\n";
  }
  return problems == 0 ? kOk : kValidation;
}

int cmd_split(const RunConfig& cfg, const std::vector<std::string>& inputs) {
  if (inputs.empty()) {
    std::cerr << "error: split needs at least one input\n";
    return kUsage;
  }
  const auto parts = split(inputs, cfg.seed);
  fs::create_directories(cfg.out);
  const auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += x + "\n";
    return s;
  };
  write_atomic(cfg.out / "work.txt", join(parts.work));
  write_atomic(cfg.out / "eval.txt", join(parts.eval));
  std::cout << "work: " << parts.work.size() << "\neval: " << parts.eval.size() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-based annotator of Arabic spatial expressions"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* annotate = app.add_subcommand("annotate", "Annotate UTF-8 text files; one JSON file per input");
  std::vector<fs::path> annotate_inputs;
  add_resource_flags(*annotate, cfg);
  annotate->add_option("--out", cfg.out, "Output directory")->required();
  annotate->add_option("inputs", annotate_inputs, "Text files")->required();

  auto* eval = app.add_subcommand("eval", "Score system annotations against gold");
  fs::path gold_dir;
  fs::path system_dir;
  eval->add_option("--gold", gold_dir, "Gold annotation directory")->required();
  eval->add_option("--system", system_dir, "System annotation directory")->required();
  eval->add_option("--mode", cfg.mode, "trigger-exact | span-overlap")->default_val("trigger-exact");
  eval->add_option("--out", cfg.out, "Machine-readable report file");

  auto* check = app.add_subcommand("check", "Validate lexicon, rules and variant table");
  add_resource_flags(*check, cfg);

  auto* split_cmd = app.add_subcommand("split", "Seeded 75/25 split into work.txt and eval.txt manifests");
  std::vector<std::string> split_inputs;
  split_cmd->add_option("inputs", split_inputs, "Document paths");
  split_cmd->add_option("--seed", cfg.seed, "Shuffle seed")->default_val(0);
  split_cmd->add_option("--out", cfg.out, "Manifest directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*annotate) return cmd_annotate(cfg, annotate_inputs);
    if (*eval) return cmd_eval(cfg, gold_dir, system_dir);
    if (*check) return cmd_check(cfg);
    if (*split_cmd) return cmd_split(cfg, split_inputs);
  } catch (const DataMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMismatch;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kUsage;
}
