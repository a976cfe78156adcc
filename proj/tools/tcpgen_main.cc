// tcpgen/tools/tcpgen_main.cc

// Copyright 2026  The tcpgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: gen-data, build-lists, train, decode, score,
// experiment.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tcpgen/checkpoint.h"
#include "tcpgen/experiment.h"

namespace fs = std::filesystem;
using namespace tcpgen;

namespace {

struct Common {
  std::string config;
  int64_t seed = -1;
  std::string out;
  bool force = false;
};

void AddCommon(CLI::App *cmd, Common *c, bool out_required = true) {
  cmd->add_option("--config", c->config, "key = value config file");
  cmd->add_option("--seed", c->seed, "override the config seed");
  auto *out = cmd->add_option("--out", c->out, "output path");
  if (out_required) out->required();
  cmd->add_flag("--force", c->force, "overwrite existing outputs");
}

ExperimentConfig LoadConfig(const Common &c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : ExperimentConfig::FromFile(c.config);
  if (c.seed >= 0) cfg.seed = static_cast<uint64_t>(c.seed);
  return cfg;
}

void Guard(const std::string &path, bool force) {
  if (fs::exists(path) && !force)
    throw Error(path + " exists (use --force to overwrite)");
}

void WriteText(const std::string &path, const std::string &text) {
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

std::string ReadText(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> TestIds(const SyntheticCorpus &corpus) {
  std::vector<std::string> ids;
  for (const auto &u : corpus.test) ids.push_back(u.id);
  return ids;
}

std::string ErrorKind(const std::exception &e) {
  if (dynamic_cast<const StageError *>(&e)) return "stage";
  if (dynamic_cast<const CheckpointError *>(&e)) return "checkpoint";
  if (dynamic_cast<const UnsegmentableWord *>(&e)) return "unsegmentable";
  if (dynamic_cast<const TrainingDiverged *>(&e)) return "diverged";
  if (dynamic_cast<const FormatError *>(&e)) return "format";
  if (dynamic_cast<const ContractViolation *>(&e)) return "contract";
  return "runtime";
}

std::string OneLine(std::string s) {
  for (char &c : s)
    if (c == '\n' || c == '\t') c = ' ';
  return s;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Tree-constrained pointer generation toolkit"};
  app.require_subcommand(1);

  Common gen;
  auto *gen_cmd = app.add_subcommand("gen-data", "generate the synthetic corpus");
  AddCommon(gen_cmd, &gen);

  Common bl;
  std::string bl_data, bl_level;
  auto *bl_cmd = app.add_subcommand("build-lists", "write test biasing lists");
  AddCommon(bl_cmd, &bl);
  bl_cmd->add_option("--data", bl_data, "corpus directory")->required();
  bl_cmd->add_option("--level", bl_level, "utterance, chapter or book (default: config levels)");

  Common tr;
  std::string tr_data, tr_system;
  auto *tr_cmd = app.add_subcommand("train", "train one system; writes <out>/model.ckpt");
  AddCommon(tr_cmd, &tr);
  tr_cmd->add_option("--data", tr_data, "corpus directory")->required();
  tr_cmd->add_option("--system", tr_system, "family:variant (default: first configured)");

  Common de;
  std::string de_data, de_model, de_lists, de_level = "utterance";
  auto *de_cmd = app.add_subcommand("decode", "decode the test set; writes an n-best file");
  AddCommon(de_cmd, &de);
  de_cmd->add_option("--data", de_data, "corpus directory")->required();
  de_cmd->add_option("--model", de_model, "checkpoint")->required();
  de_cmd->add_option("--lists", de_lists, "list directory (omit to decode without biasing)");
  de_cmd->add_option("--level", de_level, "list level");

  Common sc;
  std::string sc_data, sc_nbest, sc_lists, sc_level = "utterance", sc_system = "system";
  auto *sc_cmd = app.add_subcommand("score", "score an n-best file; writes a report");
  AddCommon(sc_cmd, &sc);
  sc_cmd->add_option("--data", sc_data, "corpus directory")->required();
  sc_cmd->add_option("--nbest", sc_nbest, "n-best file")->required();
  sc_cmd->add_option("--lists", sc_lists, "list directory")->required();
  sc_cmd->add_option("--level", sc_level, "list level");
  sc_cmd->add_option("--system", sc_system, "system name for the report");

  Common ex;
  std::string ex_data;
  auto *ex_cmd = app.add_subcommand("experiment", "lists, training, decoding and scoring");
  AddCommon(ex_cmd, &ex);
  ex_cmd->add_option("--data", ex_data, "corpus directory (generated when missing)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error\tusage\t" << OneLine(e.what()) << "\n";
    return 2;
  }

  try {
    if (*gen_cmd) {
      ExperimentConfig cfg = LoadConfig(gen);
      if (fs::exists(gen.out) && !fs::is_empty(gen.out)) {
        Guard(gen.out, gen.force);
        fs::remove_all(gen.out);
      }
      SyntheticCorpus corpus =
          GenerateCorpus(LoadVocab(cfg), cfg.corpus, cfg.dims.feat, cfg.seed);
      WriteCorpus(corpus, gen.out);
      std::cout << "wrote " << corpus.train.size() << " train and " << corpus.test.size()
                << " test utterances to " << gen.out << "\n";
    } else if (*bl_cmd) {
      ExperimentConfig cfg = LoadConfig(bl);
      SyntheticCorpus corpus = ReadCorpus(bl_data);
      RareWordList rare = ExperimentRareList(cfg, corpus);
      std::vector<ListLevel> levels = cfg.levels;
      if (!bl_level.empty()) levels = {ParseListLevel(bl_level)};
      for (ListLevel level : levels) {
        ListMap lists = BuildTestLists(cfg, corpus, rare, level);
        WriteLists(lists, level, bl.out);
        std::cout << "wrote " << lists.size() << " " << ToString(level) << " lists\n";
      }
    } else if (*tr_cmd) {
      ExperimentConfig cfg = LoadConfig(tr);
      System system = tr_system.empty() ? cfg.systems.front() : System::Parse(tr_system);
      const std::string ckpt = tr.out + "/model.ckpt";
      Guard(ckpt, tr.force);
      SyntheticCorpus corpus = ReadCorpus(tr_data);
      RareWordList rare = ExperimentRareList(cfg, corpus);
      auto model = NewModel(cfg, system, corpus.vocab);
      TrainSystem(cfg, system, corpus, rare, model.get(), [](const EpochStats &s) {
        std::cerr << "epoch " << s.epoch << " loss " << s.mean_loss << "\n";
      });
      fs::create_directories(tr.out);
      SaveModel(*model, cfg, ckpt);
      std::cout << "wrote " << ckpt << "\n";
    } else if (*de_cmd) {
      Guard(de.out, de.force);
      SyntheticCorpus corpus = ReadCorpus(de_data);
      ExperimentConfig cfg;
      auto model = LoadModel(de_model, corpus.vocab, &cfg);
      // Decode settings come from --config when given.
      if (!de.config.empty()) {
        ExperimentConfig over = LoadConfig(de);
        cfg.decode = over.decode;
        cfg.train.parallel = over.train.parallel;
      }
      ListMap lists;
      if (!de_lists.empty()) lists = ReadLists(de_lists, ParseListLevel(de_level), TestIds(corpus));
      std::unique_ptr<LanguageModel> lm;
      if (cfg.decode.lm_weight > 0.0) lm = TrainBigram(corpus);
      auto nbest = DecodeTestSet(cfg, *model, corpus.test,
                                 de_lists.empty() ? nullptr : &lists, lm.get());
      std::string text;
      for (size_t i = 0; i < corpus.test.size(); ++i)
        text += FormatNbest(corpus.test[i].id, nbest[i], corpus.vocab);
      WriteText(de.out, text);
      std::cout << "wrote " << de.out << "\n";
    } else if (*sc_cmd) {
      Guard(sc.out, sc.force);
      SyntheticCorpus corpus = ReadCorpus(sc_data);
      ListLevel level = ParseListLevel(sc_level);
      ListMap lists = ReadLists(sc_lists, level, TestIds(corpus));
      ScoreReport r = ScoreTestSet(sc_system, level, corpus.test,
                                   ReadNbestTop(ReadText(sc_nbest)), lists);
      WriteText(sc.out, r.ToText());
      std::cout << r.SummaryLine() << "\n";
    } else if (*ex_cmd) {
      ExperimentConfig cfg = LoadConfig(ex);
      if (!fs::exists(ex_data + "/vocab.txt")) {
        WriteCorpus(GenerateCorpus(LoadVocab(cfg), cfg.corpus, cfg.dims.feat, cfg.seed),
                    ex_data);
      }
      ExperimentResult r = RunExperiment(cfg, ex_data, ex.out, ex.force, &std::cerr);
      std::cout << r.table << "run directory: " << r.run_dir << "\n";
    }
  } catch (const std::exception &e) {
    std::cerr << "error\t" << ErrorKind(e) << "\t" << OneLine(e.what()) << "\n";
    return 1;
  }
  return 0;
}
