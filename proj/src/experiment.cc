// tcpgen/src/experiment.cc

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

#include "tcpgen/experiment.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tcpgen/checkpoint.h"
#include "tcpgen/prng.h"

namespace tcpgen {

namespace fs = std::filesystem;

namespace {

void WriteFile(const std::string &path, const std::string &text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("write failed: " + path);
}

std::string ReadFile(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string DirName(const System &s) {
  std::string n = s.Name();
  for (char &c : n)
    if (c == ':') c = '_';
  return n;
}

template <typename Fn>
auto Stage(const std::string &name, Fn &&fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError &) {
    throw;
  } catch (const std::exception &e) {
    throw StageError(name, e.what());
  }
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

std::string Pad(const std::string &s, size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

}  // namespace

SubwordVocab LoadVocab(const ExperimentConfig &cfg) {
  return cfg.vocab_file.empty() ? DefaultVocab() : SubwordVocab::FromFile(cfg.vocab_file);
}

RareWordList ExperimentRareList(const ExperimentConfig &cfg,
                                const SyntheticCorpus &corpus) {
  return FilterSegmentable(corpus.vocab,
                           BuildRareWordList(corpus.TrainCounts(), cfg.rare_threshold));
}

ListMap BuildTestLists(const ExperimentConfig &cfg, const SyntheticCorpus &corpus,
                       const RareWordList &rare, ListLevel level) {
  ListMap lists;
  const WordCounts counts = corpus.TrainCounts();
  std::map<std::string, BiasingList> per_chapter;
  for (const auto &u : corpus.test) {
    switch (level) {
      case ListLevel::kUtterance: {
        Prng rng(DeriveSeed(cfg.seed, "test-list/utterance/" + u.id));
        BiasingList l = BuildUtteranceList(u.words, rare, cfg.test_distractors, &rng);
        l.source_id = u.id;
        lists.emplace(u.id, std::move(l));
        break;
      }
      case ListLevel::kChapter:
      case ListLevel::kBook: {
        auto it = per_chapter.find(u.chapter_id);
        if (it == per_chapter.end()) {
          const Book &book = corpus.FindBook(u.book_id);
          Prng rng(DeriveSeed(cfg.seed, "test-list/" + ToString(level) + "/" + u.chapter_id));
          BiasingList l =
              level == ListLevel::kChapter
                  ? BuildChapterList(book, u.chapter_id, rare, counts, &rng,
                                     u.chapter_id, cfg.chapter_list_cap, cfg.chapter_window)
                  : BuildBookList(book, LineWindow{u.start_line, u.end_line}, rare,
                                  counts, &rng, u.chapter_id, cfg.book_list_cap,
                                  cfg.book_window);
          it = per_chapter.emplace(u.chapter_id, std::move(l)).first;
        }
        lists.emplace(u.id, it->second);
        break;
      }
    }
  }
  return lists;
}

void WriteLists(const ListMap &lists, ListLevel level, const std::string &dir) {
  fs::create_directories(dir);
  for (const auto &[id, list] : lists)
    WriteFile(dir + "/" + id + "." + ToString(level) + ".txt", list.ToText());
}

ListMap ReadLists(const std::string &dir, ListLevel level,
                  const std::vector<std::string> &utt_ids) {
  ListMap lists;
  for (const auto &id : utt_ids) {
    lists.emplace(id, BiasingList::FromText(
                          ReadFile(dir + "/" + id + "." + ToString(level) + ".txt"),
                          level, id));
  }
  return lists;
}

std::vector<TrainUtterance> TrainingSet(const SyntheticCorpus &corpus) {
  std::vector<TrainUtterance> out;
  out.reserve(corpus.train.size());
  for (const auto &u : corpus.train) {
    TrainUtterance t;
    t.id = u.id;
    t.features = u.features;
    t.words = u.words;
    t.target = TokenizeSentence(corpus.vocab, JoinWords(u.words));
    out.push_back(std::move(t));
  }
  return out;
}

std::unique_ptr<ToyModel> NewModel(const ExperimentConfig &cfg, const System &system,
                                   const SubwordVocab &vocab) {
  auto model = MakeModel(system.family, system.variant, vocab, cfg.dims);
  Prng rng(DeriveSeed(cfg.seed, "init/" + system.Name()));
  model->Init(&rng);
  return model;
}

std::vector<EpochStats> TrainSystem(const ExperimentConfig &cfg,
                                    const System &system,
                                    const SyntheticCorpus &corpus,
                                    const RareWordList &rare, ToyModel *model,
                                    const EpochCallback &on_epoch) {
  TrainConfig tc = cfg.train;
  tc.seed = DeriveSeed(cfg.seed, "train/" + system.Name());
  tc.epochs = system.family == ModelFamily::kAed ? cfg.aed_epochs : cfg.rnnt_epochs;
  return Train(*model, tc, TrainingSet(corpus), rare, on_epoch);
}

void SaveModel(ToyModel &model, const ExperimentConfig &cfg, const std::string &path) {
  SaveCheckpoint(FromParams(model.Params()), path);
  ExperimentConfig echo = cfg;
  echo.systems = {System{model.family(), model.variant()}};
  echo.dims = model.dims();
  WriteFile(path + ".config", echo.ToText());
}

std::unique_ptr<ToyModel> LoadModel(const std::string &path, const SubwordVocab &vocab,
                                    ExperimentConfig *cfg) {
  ExperimentConfig echo = ExperimentConfig::FromFile(path + ".config");
  const System &s = echo.systems.front();
  auto model = MakeModel(s.family, s.variant, vocab, echo.dims);
  ToParams(LoadCheckpoint(path), model->Params());
  if (cfg != nullptr) *cfg = echo;
  return model;
}

std::unique_ptr<LanguageModel> TrainBigram(const SyntheticCorpus &corpus) {
  std::vector<TokenSeq> sents;
  for (const auto &u : corpus.train)
    sents.push_back(TokenizeSentence(corpus.vocab, JoinWords(u.words)));
  return std::make_unique<BigramLm>(corpus.vocab, sents);
}

std::vector<NbestList> DecodeTestSet(const ExperimentConfig &cfg,
                                     const ToyModel &model,
                                     const std::vector<CorpusUtterance> &utts,
                                     const ListMap *lists,
                                     const LanguageModel *lm) {
  std::vector<const Matrix *> feats;
  std::vector<PrefixTree> store;
  store.reserve(utts.size());
  for (const auto &u : utts) {
    feats.push_back(&u.features);
    if (lists != nullptr) {
      auto it = lists->find(u.id);
      if (it == lists->end()) throw FormatError("no biasing list for " + u.id);
      store.push_back(PrefixTree::Build(model.vocab(), it->second.words));
    }
  }
  std::vector<const PrefixTree *> trees(utts.size(), nullptr);
  if (lists != nullptr)
    for (size_t i = 0; i < utts.size(); ++i) trees[i] = &store[i];
  const bool biasing = lists != nullptr;
  return cfg.train.parallel
             ? DecodeBatchParallel(model, feats, trees, cfg.decode, lm, biasing)
             : DecodeBatchSerial(model, feats, trees, cfg.decode, lm, biasing);
}

std::map<std::string, std::vector<std::string>> ReadNbestTop(const std::string &text) {
  std::map<std::string, std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, '\t')) f.push_back(field);
    if (f.size() == 3) f.push_back("");
    if (f.size() != 4)
      throw FormatError("n-best line " + std::to_string(lineno) + ": expected 4 fields");
    if (f[1] == "1") out[f[0]] = SplitWords(f[3]);
  }
  return out;
}

ScoreReport ScoreTestSet(const std::string &system, ListLevel level,
                         const std::vector<CorpusUtterance> &utts,
                         const std::map<std::string, std::vector<std::string>> &hyps,
                         const ListMap &lists) {
  std::vector<ScoredUtterance> scored;
  for (const auto &u : utts) {
    auto h = hyps.find(u.id);
    auto l = lists.find(u.id);
    if (l == lists.end()) throw FormatError("no biasing list for " + u.id);
    ScoredUtterance s;
    s.utt_id = u.id;
    s.chapter_id = u.chapter_id;
    s.ref = u.words;
    if (h != hyps.end()) s.hyp = h->second;
    s.list = &l->second;
    scored.push_back(std::move(s));
  }
  return ScoreSet(system, level, std::move(scored));
}

ExperimentResult RunExperiment(const ExperimentConfig &cfg,
                               const std::string &data_dir,
                               const std::string &out_root, bool force,
                               std::ostream *log) {
  auto say = [&](const std::string &msg) {
    if (log != nullptr) *log << msg << std::endl;
  };
  ExperimentResult result;
  result.run_dir = out_root + "/" + cfg.Hash();
  Stage("setup", [&] {
    if (fs::exists(result.run_dir)) {
      if (!force)
        throw Error("run directory " + result.run_dir + " exists (use --force to overwrite)");
      fs::remove_all(result.run_dir);
    }
    fs::create_directories(result.run_dir);
    WriteFile(result.run_dir + "/config.txt", cfg.ToText());
    return 0;
  });

  SyntheticCorpus corpus = Stage("load-data", [&] { return ReadCorpus(data_dir); });

  RareWordList rare = Stage("build-lists", [&] { return ExperimentRareList(cfg, corpus); });
  std::map<ListLevel, ListMap> lists;
  Stage("build-lists", [&] {
    std::string rare_text;
    for (const auto &w : rare.words()) rare_text += w + "\n";
    WriteFile(result.run_dir + "/rare_words.txt", rare_text);
    for (ListLevel level : cfg.levels) {
      lists[level] = BuildTestLists(cfg, corpus, rare, level);
      WriteLists(lists[level], level, result.run_dir + "/lists");
    }
    return 0;
  });
  say("rare list: " + std::to_string(rare.words().size()) + " words");

  std::unique_ptr<LanguageModel> lm;
  if (cfg.decode.lm_weight > 0.0) lm = TrainBigram(corpus);

  std::map<std::string, std::map<ListLevel, ScoreReport>> by_system;
  std::vector<std::string> row_names;
  for (const System &system : cfg.systems) {
    const std::string name = system.Name();
    const std::string dir = result.run_dir + "/" + DirName(system);
    fs::create_directories(dir);

    auto model = Stage("train " + name, [&] {
      say("training " + name);
      auto m = NewModel(cfg, system, corpus.vocab);
      std::string train_log;
      TrainSystem(cfg, system, corpus, rare, m.get(), [&](const EpochStats &s) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "epoch %d loss %.6f grad_norm %.6f", s.epoch,
                      s.mean_loss, s.mean_grad_norm);
        train_log += std::string(buf) + "\n";
        say("  " + std::string(buf));
      });
      WriteFile(dir + "/train.log", train_log);
      SaveModel(*m, cfg, dir + "/model.ckpt");
      return m;
    });

    const bool biased = UsesTcpgen(system.variant) || UsesDeepBiasing(system.variant);
    std::vector<std::pair<std::string, const LanguageModel *>> fusions = {{name, nullptr}};
    if (lm != nullptr) fusions.push_back({name + "+sf", lm.get()});
    for (const auto &[row, fusion_lm] : fusions) {
      row_names.push_back(row);
      std::string suffix = fusion_lm != nullptr ? ".sf" : "";
      std::vector<NbestList> unbiased;
      if (!biased) {
        unbiased = Stage("decode " + row, [&] {
          return DecodeTestSet(cfg, *model, corpus.test, nullptr, fusion_lm);
        });
      }
      for (ListLevel level : cfg.levels) {
        const std::string lv = ToString(level);
        std::vector<NbestList> nbest =
            biased ? Stage("decode " + row + " " + lv, [&] {
              return DecodeTestSet(cfg, *model, corpus.test, &lists[level], fusion_lm);
            })
                   : unbiased;
        std::string text;
        std::map<std::string, std::vector<std::string>> top;
        for (size_t i = 0; i < corpus.test.size(); ++i) {
          text += FormatNbest(corpus.test[i].id, nbest[i], corpus.vocab);
          top[corpus.test[i].id] =
              nbest[i].empty() ? std::vector<std::string>{}
                               : HypothesisWords(corpus.vocab, nbest[i].front().tokens);
        }
        WriteFile(dir + "/nbest." + lv + suffix + ".txt", text);
        ScoreReport report = Stage("score " + row + " " + lv, [&] {
          return ScoreTestSet(row, level, corpus.test, top, lists[level]);
        });
        by_system[row][level] = report;
        say("  " + report.SummaryLine());
      }
    }
  }

  // Reports, with sign tests against the baseline of the same family.
  Stage("report", [&] {
    for (const System &system : cfg.systems) {
      std::vector<std::string> rows = {system.Name()};
      if (lm != nullptr) rows.push_back(system.Name() + "+sf");
      const std::string base = ToString(system.family) + ":baseline";
      for (const auto &row : rows) {
        std::string suffix = row.size() > 3 && row.ends_with("+sf") ? ".sf" : "";
        for (ListLevel level : cfg.levels) {
          const ScoreReport &r = by_system[row][level];
          const ScoreReport *b = nullptr;
          if (row != base && by_system.count(base)) b = &by_system[base][level];
          WriteFile(result.run_dir + "/" + DirName(system) + "/report." +
                        ToString(level) + suffix + ".txt",
                    r.ToText(b));
          result.reports.push_back(r);
        }
      }
    }

    std::string table = Pad("system", 22);
    for (ListLevel level : cfg.levels) table += Pad(ToString(level), 18);
    table += "\n";
    for (const auto &row : row_names) {
      table += Pad(row, 22);
      for (ListLevel level : cfg.levels) {
        const ScoreReport &r = by_system[row][level];
        auto rw = r.Rwer();
        table += Pad(Percent(r.Wer()) + " (" + (rw ? Percent(*rw) : std::string("n/a")) + ")", 18);
      }
      table += "\n";
    }
    table += Pad("coverage", 22);
    for (ListLevel level : cfg.levels) {
      std::vector<std::vector<std::string>> refs;
      std::vector<const BiasingList *> ls;
      for (const auto &u : corpus.test) {
        refs.push_back(u.words);
        ls.push_back(&lists[level].at(u.id));
      }
      table += Pad(Percent(Coverage(refs, ls)) + "%", 18);
    }
    table += "\n";
    std::string summary;
    for (const ScoreReport &r : result.reports) summary += r.SummaryLine() + "\n";
    result.table = table;
    WriteFile(result.run_dir + "/results.txt",
              "# WER % (R-WER %) per list level\n" + table + "\n# summary\n" + summary);
    return 0;
  });
  return result;
}

}  // namespace tcpgen
