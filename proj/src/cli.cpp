/*
 * Copyright 2026 The tretr Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tretr/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "tretr/clustering.hpp"
#include "tretr/engine.hpp"
#include "tretr/fairness.hpp"
#include "tretr/io.hpp"
#include "tretr/metrics.hpp"
#include "tretr/retrievability.hpp"

namespace tretr {

namespace {

namespace fs = std::filesystem;

QuerySet load_queries(const fs::path& path) {
  auto in = open_input(path);
  return parse_queries(in);
}

RunTable load_run(const fs::path& path, std::uint32_t depth) {
  auto in = open_input(path);
  return parse_run(in, depth);
}

std::vector<CorpusDoc> load_corpus(const fs::path& path) {
  auto in = open_input(path);
  return parse_corpus(in);
}

ClusterAssignment load_clusters(const fs::path& path) {
  auto in = open_input(path);
  return parse_clusters(in);
}

EmbeddingMatrix load_embeddings(const fs::path& path) {
  auto in = open_input(path, /*binary=*/true);
  return read_embeddings(in);
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer, bool binary = false) {
  auto out = open_output(path, binary);
  writer(out);
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

// "plusplus" or "explicit:<file>" with one 0-based row index per line.
KMeansInit parse_init(const std::string& text) {
  if (text == "plusplus") return PlusPlusInit{};
  const std::string prefix = "explicit:";
  if (text.rfind(prefix, 0) != 0) {
    throw Error("unknown init '" + text +
                "' (expected plusplus or explicit:<file>)");
  }
  auto in = open_input(text.substr(prefix.size()));
  ExplicitInit init;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(line, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != line.size()) throw ParseError("bad init index", lineno);
    init.indices.push_back(static_cast<std::size_t>(v));
  }
  return init;
}

// Options shared by every retrievability-consuming command.
struct RetrievabilityFlags {
  std::uint32_t depth = kDefaultDepth;
  std::string log_base = "e";
  std::string universe = "pooled";
  std::string mode = "reciprocal-log";
  unsigned threads = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--depth", depth, "Rank cutoff")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--log-base", log_base, "Logarithm base {e,2,10}")
        ->capture_default_str()
        ->check(CLI::IsMember({"e", "2", "10"}));
    cmd->add_option("--universe", universe,
                    "Document universe {pooled,collection:<N>}")
        ->capture_default_str();
    cmd->add_option("--mode", mode,
                    "Rank weighting {reciprocal-log,indicator:<c>}")
        ->capture_default_str();
    cmd->add_option("--threads", threads, "Worker threads")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }

  RetrievabilityOptions options() const {
    RetrievabilityOptions o;
    o.depth = depth;
    o.log_base = parse_log_base(log_base);
    o.universe = parse_universe(universe);
    o.mode = parse_mode(mode);
    o.threads = threads;
    return o;
  }
};

struct ClusterFlags {
  std::string repr = "tfidf";
  std::string embeddings;
  std::uint64_t seed = 0;
  std::uint32_t max_iter = 100;
  double tol = 1e-4;

  void attach(CLI::App* cmd) {
    cmd->add_option("--repr", repr, "Query representation {tfidf,dense}")
        ->capture_default_str()
        ->check(CLI::IsMember({"tfidf", "dense"}));
    cmd->add_option("--embeddings", embeddings,
                    "TRETR-EMB matrix (required for --repr dense)");
    cmd->add_option("--seed", seed, "Random seed")->required();
    cmd->add_option("--max-iter", max_iter, "K-means iteration budget")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", tol, "Relative objective tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Retrievability and topical exposure-fairness toolkit",
               "tretr"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string out_path;
  std::string out_dir;
  std::string corpus_path;
  std::string queries_path;
  std::string run_path;
  std::string qrels_path;
  std::string clusters_path;
  std::string table_path;
  std::string tag = "bm25";
  std::string init_text = "plusplus";
  std::string vocab_out;
  std::uint32_t depth = kDefaultDepth;
  std::uint32_t k = 1;
  std::vector<std::uint32_t> k_values;
  std::size_t count = 0;
  double bigram_fraction = 0.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  Bm25Params bm25;
  RetrievabilityFlags rflags;
  ClusterFlags cflags;
  std::function<void()> action;

  // index
  auto* index_cmd = app.add_subcommand(
      "index", "Index a corpus and write term statistics (term, df, cf)");
  index_cmd->add_option("--corpus", corpus_path, "Corpus TSV docid<TAB>text")
      ->required();
  index_cmd->add_option("--out", out_path, "Output TSV")->required();
  index_cmd->callback([&] {
    action = [&] {
      const auto docs = load_corpus(corpus_path);
      const auto index = InvertedIndex::build(docs);
      write_file(out_path, [&](std::ostream& o) {
        o << "term\tdf\tcf\n";
        for (TermId t = 0; t < index.vocab_size(); ++t) {
          o << index.term(t) << '\t' << index.df(t) << '\t' << index.cf(t)
            << '\n';
        }
      });
      err << "indexed " << index.doc_count() << " documents, "
          << index.vocab_size() << " terms, avgdl "
          << format_exact(index.avgdl()) << '\n';
    };
  });

  // search
  auto* search_cmd =
      app.add_subcommand("search", "Run BM25 for every query; write a run");
  search_cmd->add_option("--corpus", corpus_path, "Corpus TSV")->required();
  search_cmd->add_option("--queries", queries_path, "Query TSV")->required();
  search_cmd->add_option("--out", out_path, "Output run file")->required();
  search_cmd->add_option("--depth", depth, "Results per query")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  search_cmd->add_option("--k1", bm25.k1, "BM25 k1")->capture_default_str();
  search_cmd->add_option("--b", bm25.b, "BM25 b")->capture_default_str();
  search_cmd->add_option("--tag", tag, "Run tag")->capture_default_str();
  search_cmd->add_option("--threads", threads, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  search_cmd->callback([&] {
    action = [&] {
      const auto docs = load_corpus(corpus_path);
      const auto index = InvertedIndex::build(docs);
      const auto queries = load_queries(queries_path);
      const auto run = bm25_run(index, queries, bm25, depth, tag, threads);
      write_file(out_path, [&](std::ostream& o) { write_run(run, o); });
      err << "searched " << queries.size() << " queries, "
          << run.lists().size() << " with results\n";
    };
  });

  // synth-queries
  auto* synth_cmd = app.add_subcommand(
      "synth-queries", "Sample simulated unigram/bigram queries");
  synth_cmd->add_option("--corpus", corpus_path, "Corpus TSV")->required();
  synth_cmd->add_option("--count", count, "Number of queries")
      ->required()
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--bigram-fraction", bigram_fraction,
                        "Share of bigram queries in [0,1]")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--seed", seed, "Random seed")->required();
  synth_cmd->add_option("--out", out_path, "Output query TSV")->required();
  synth_cmd->callback([&] {
    action = [&] {
      const auto docs = load_corpus(corpus_path);
      const auto index = InvertedIndex::build(docs);
      const auto queries =
          generate_synthetic_queries(index, count, bigram_fraction, seed);
      write_file(out_path, [&](std::ostream& o) { write_queries(queries, o); });
      err << "generated " << queries.size() << " queries\n";
    };
  });

  // vectorize
  auto* vec_cmd = app.add_subcommand(
      "vectorize", "Write TF-IDF query vectors as qid<TAB>ordinal:weight ...");
  vec_cmd->add_option("--queries", queries_path, "Query TSV")->required();
  vec_cmd->add_option("--out", out_path, "Output vectors TSV")->required();
  vec_cmd->add_option("--vocab-out", vocab_out,
                      "Optional vocabulary TSV ordinal<TAB>term");
  vec_cmd->callback([&] {
    action = [&] {
      const auto queries = load_queries(queries_path);
      const auto tfidf = tfidf_vectorize(queries);
      write_file(out_path, [&](std::ostream& o) {
        for (std::size_t i = 0; i < queries.size(); ++i) {
          o << queries[i].id.str() << '\t';
          const auto& v = tfidf.vectors[i];
          for (std::size_t j = 0; j < v.nnz(); ++j) {
            if (j > 0) o << ' ';
            o << v.indices()[j] << ':' << format_exact(v.values()[j]);
          }
          o << '\n';
        }
      });
      if (!vocab_out.empty()) {
        write_file(vocab_out, [&](std::ostream& o) {
          for (std::size_t t = 0; t < tfidf.vocabulary.size(); ++t) {
            o << t << '\t' << tfidf.vocabulary[t] << '\n';
          }
        });
      }
      err << "vectorized " << queries.size() << " queries over "
          << tfidf.vocabulary.size() << " terms\n";
    };
  });

  // cluster
  auto* cluster_cmd =
      app.add_subcommand("cluster", "K-means over query representations");
  cluster_cmd->add_option("--queries", queries_path, "Query TSV")->required();
  cluster_cmd->add_option("--k", k, "Number of groups")
      ->required()
      ->check(CLI::PositiveNumber);
  cluster_cmd->add_option("--init", init_text,
                          "Seeding {plusplus,explicit:<file>}")
      ->capture_default_str();
  cluster_cmd->add_option("--threads", threads, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cluster_cmd->add_option("--out", out_path, "Output clusters CSV")
      ->required();
  cflags.attach(cluster_cmd);
  cluster_cmd->callback([&] {
    if (cflags.repr == "dense" && cflags.embeddings.empty()) {
      throw CLI::RequiredError("--embeddings (needed by --repr dense)");
    }
    action = [&] {
      const auto queries = load_queries(queries_path);
      std::optional<EmbeddingMatrix> emb;
      Representation repr = TfidfRepresentation{};
      if (cflags.repr == "dense") {
        emb.emplace(load_embeddings(cflags.embeddings));
        repr = DenseRepresentation{&*emb};
      }
      KMeansOptions opt;
      opt.k = k;
      opt.seed = cflags.seed;
      opt.init = parse_init(init_text);
      opt.max_iter = cflags.max_iter;
      opt.tol = cflags.tol;
      opt.threads = threads;
      const auto clusters = cluster_queries(queries, repr, opt);
      write_file(out_path,
                 [&](std::ostream& o) { write_clusters(clusters, o); });
      err << describe_clustering(repr, opt) << '\n';
    };
  });

  // retrievability
  auto* retr_cmd = app.add_subcommand(
      "retrievability", "Write document retrievability as docid,score CSV");
  retr_cmd->add_option("--run", run_path, "Run file")->required();
  retr_cmd->add_option("--queries", queries_path, "Query TSV")->required();
  retr_cmd->add_option("--out", out_path, "Output table CSV")->required();
  retr_cmd->add_option("--clusters", clusters_path,
                       "Also write one table per group");
  retr_cmd->add_option("--out-dir", out_dir,
                       "Directory for group-<g>.csv (with --clusters)");
  rflags.attach(retr_cmd);
  retr_cmd->callback([&] {
    if (!clusters_path.empty() && out_dir.empty()) {
      throw CLI::RequiredError("--out-dir (needed by --clusters)");
    }
    action = [&] {
      const auto options = rflags.options();
      const auto queries = load_queries(queries_path);
      const auto run = load_run(run_path, options.depth);
      const auto table = retrievability_global(run, queries, options);
      write_file(out_path, [&](std::ostream& o) { write_table(table, o); });
      if (!clusters_path.empty()) {
        const auto clusters = load_clusters(clusters_path);
        const auto tables =
            retrievability_local(run, queries, clusters, options);
        fs::create_directories(out_dir);
        for (std::size_t g = 0; g < tables.size(); ++g) {
          if (!tables[g]) continue;
          write_file(fs::path(out_dir) / ("group-" + std::to_string(g) +
                                          ".csv"),
                     [&](std::ostream& o) { write_table(*tables[g], o); });
        }
      }
      err << "scored " << table.size() << " documents over "
          << queries.size() << " queries\n";
    };
  });

  // gini
  auto* gini_cmd = app.add_subcommand(
      "gini", "Gini coefficient of a docid,score table (printed or --out)");
  gini_cmd->add_option("--table", table_path, "Table CSV")->required();
  gini_cmd->add_option("--universe", rflags.universe,
                       "Document universe {pooled,collection:<N>}")
      ->capture_default_str();
  gini_cmd->add_option("--out", out_path, "Optional output file");
  gini_cmd->callback([&] {
    action = [&] {
      auto in = open_input(table_path);
      const auto rows = parse_table(in);
      std::vector<double> values;
      values.reserve(rows.size());
      for (const auto& [doc, score] : rows) values.push_back(score);
      const auto universe = parse_universe(rflags.universe);
      if (const auto* full = std::get_if<FullCollection>(&universe)) {
        if (full->size < values.size()) {
          throw Error("collection size is smaller than the table");
        }
        values.resize(full->size, 0.0);
      }
      const std::string text = format_fixed6(gini(values)) + '\n';
      if (out_path.empty()) {
        out << text;
      } else {
        write_file(out_path, [&](std::ostream& o) { o << text; });
      }
    };
  });

  // treport
  auto* treport_cmd = app.add_subcommand(
      "treport", "Per-group Ginis and min/avg/max aggregates as JSON");
  treport_cmd->add_option("--run", run_path, "Run file")->required();
  treport_cmd->add_option("--queries", queries_path, "Query TSV")->required();
  treport_cmd->add_option("--clusters", clusters_path, "Clusters CSV")
      ->required();
  treport_cmd->add_option("--out", out_path, "Output report JSON")
      ->required();
  rflags.attach(treport_cmd);
  treport_cmd->callback([&] {
    action = [&] {
      const auto options = rflags.options();
      const auto queries = load_queries(queries_path);
      const auto run = load_run(run_path, options.depth);
      const auto clusters = load_clusters(clusters_path);
      const auto global = retrievability_global(run, queries, options);
      const auto tables = retrievability_local(run, queries, clusters, options);
      ReportConfig config;
      config.log_base = options.log_base;
      config.depth = options.depth;
      config.universe = options.universe;
      config.mode = to_string(options.mode);
      config.clustering = "file:" + fs::path(clusters_path).filename().string();
      const auto report =
          t_retrievability(tables, config, gini(materialize(global)));
      write_file(out_path, [&](std::ostream& o) { write_report(report, o); });
      const auto& a = report.aggregates();
      err << "G=" << format_fixed6(*report.global_gini())
          << " G_min=" << format_fixed6(a.min)
          << " G_avg=" << format_fixed6(a.avg)
          << " G_max=" << format_fixed6(a.max) << '\n';
    };
  });

  // sweep
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Aggregated Ginis across several K; writes k,min,avg,max CSV");
  sweep_cmd->add_option("--run", run_path, "Run file")->required();
  sweep_cmd->add_option("--queries", queries_path, "Query TSV")->required();
  sweep_cmd->add_option("--k", k_values, "Comma-separated K values")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", out_path, "Output CSV")->required();
  sweep_cmd->add_option("--out-dir", out_dir,
                        "Optional directory for report-k<K>.json");
  cflags.attach(sweep_cmd);
  rflags.attach(sweep_cmd);
  sweep_cmd->callback([&] {
    if (cflags.repr == "dense" && cflags.embeddings.empty()) {
      throw CLI::RequiredError("--embeddings (needed by --repr dense)");
    }
    action = [&] {
      const auto options = rflags.options();
      const auto queries = load_queries(queries_path);
      const auto run = load_run(run_path, options.depth);
      std::optional<EmbeddingMatrix> emb;
      Representation repr = TfidfRepresentation{};
      if (cflags.repr == "dense") {
        emb.emplace(load_embeddings(cflags.embeddings));
        repr = DenseRepresentation{&*emb};
      }
      KMeansOptions opt;
      opt.seed = cflags.seed;
      opt.max_iter = cflags.max_iter;
      opt.tol = cflags.tol;
      opt.threads = options.threads;
      const auto sweep = sweep_k(run, queries, repr, k_values, opt, options);
      write_file(out_path, [&](std::ostream& o) { write_sweep_csv(sweep, o); });
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        for (const auto& p : sweep) {
          write_file(fs::path(out_dir) /
                         ("report-k" + std::to_string(p.k) + ".json"),
                     [&](std::ostream& o) { write_report(p.report, o); });
        }
      }
      err << "swept " << sweep.size() << " values of K\n";
    };
  });

  // eval
  auto* eval_cmd = app.add_subcommand(
      "eval", "nDCG@10 and MAP@100 per query plus an 'all' summary row");
  eval_cmd->add_option("--run", run_path, "Run file")->required();
  eval_cmd->add_option("--qrels", qrels_path, "Qrels file")->required();
  eval_cmd->add_option("--out", out_path, "Output CSV")->required();
  eval_cmd->add_option("--depth", depth, "Rank cutoff applied when parsing")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  eval_cmd->callback([&] {
    action = [&] {
      const auto run = load_run(run_path, depth);
      auto in = open_input(qrels_path);
      const auto qrels = parse_qrels(in);
      const auto ndcg = ndcg_at_10(run, qrels);
      const auto map = map_at_100(run, qrels);
      write_file(out_path,
                 [&](std::ostream& o) { write_eval_csv(ndcg, map, o); });
      err << "nDCG@10=" << format_fixed6(ndcg.mean)
          << " MAP@100=" << format_fixed6(map.mean) << " over "
          << ndcg.per_query.size() << " queries\n";
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    err << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    if (action) action();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace tretr
