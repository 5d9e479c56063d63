#include "ufam/cli.hpp"

#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ufam/adequacy.hpp"
#include "ufam/derivative.hpp"
#include "ufam/family.hpp"
#include "ufam/ftree.hpp"

namespace ufam {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json finset_json(const FinSet& s) {
  ordered_json a = ordered_json::array();
  for (Nat x : s.elements()) a.push_back(x);
  return a;
}

ordered_json transcript_json(const AdequacyTranscript& t) {
  ordered_json j;
  j["verdict"] = t.verdict;
  j["case"] = adequacy_case_name(t.kase);
  j["window"] = t.window;
  ordered_json ws = ordered_json::array();
  for (const auto& w : t.witnesses) {
    ordered_json jw;
    if (w.n) jw["n"] = *w.n;
    if (w.v) jw["v"] = finset_json(*w.v);
    jw["rank"] = w.rank;
    if (w.sub) jw["sub"] = transcript_json(*w.sub);
    ws.push_back(std::move(jw));
  }
  j["witnesses"] = std::move(ws);
  j["certified"] = t.certified;
  if (!t.note.empty()) j["note"] = t.note;
  return j;
}

ordered_json verdict_json(const LimitVerdict& v,
                          const std::vector<FinSet>* witnesses) {
  ordered_json j;
  j["is_limit"] = v.is_limit;
  j["u"] = finset_json(v.run.u);
  j["p"] = v.run.p;
  j["m"] = v.run.m;
  j["reason"] = limit_reason_name(v.reason);
  if (witnesses) {
    ordered_json ws = ordered_json::array();
    for (const auto& w : *witnesses) ws.push_back(finset_json(w));
    j["witnesses"] = std::move(ws);
  }
  return j;
}

void render_table(const ordered_json& j, std::ostream& os,
                  const std::string& prefix = "") {
  for (const auto& [key, value] : j.items()) {
    std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object())
      render_table(value, os, name);
    else
      os << name << ": " << value.dump() << "\n";
  }
}

struct Ctx {
  bool table{false};
  ordered_json out;
};

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CLI::App app{"calculus for uniform families of finite sets"};
  app.require_subcommand(1);
  Ctx ctx;
  app.add_flag("--table", ctx.table, "render output as aligned key/value lines");

  std::string family_s, ground_s = "all", finset_s, schema_s;
  Nat num = 0, level = 0, kk = 0;
  Nat count = 20, witnesses = 3, window = 64, budget = 10;
  std::function<void()> action;

  auto* rank = app.add_subcommand("rank", "uniform rank of a family");
  rank->add_option("family", family_s)->required();
  rank->callback([&] {
    action = [&] {
      FamilyBuilder b = FamilyBuilder::parse(family_s);
      ctx.out["family"] = b.str();
      ctx.out["base"] = b.base();
      ctx.out["rank"] = b.uniform_rank().str();
    };
  });

  auto* member = app.add_subcommand("member", "membership of a finite set");
  member->add_option("family", family_s)->required();
  member->add_option("finset", finset_s)->required();
  member->add_option("--restrict", ground_s, "ground set to restrict to");
  member->callback([&] {
    action = [&] {
      FamilyBuilder b = FamilyBuilder::parse(family_s);
      FinSet t = FinSet::parse(finset_s);
      ctx.out["member"] = b.member_restricted(t, GroundSet::parse(ground_s));
    };
  });

  auto* tmin = app.add_subcommand("tmin", "minimal member from a start point");
  tmin->add_option("family", family_s)->required();
  tmin->add_option("n", num)->required();
  tmin->callback([&] {
    action = [&] {
      ctx.out["t"] = finset_json(FamilyBuilder::parse(family_s).t_min(num));
    };
  });

  auto* en = app.add_subcommand("enum", "lexicographic enumeration");
  en->add_option("family", family_s)->required();
  en->add_option("--restrict", ground_s);
  en->add_option("--count", count);
  en->callback([&] {
    action = [&] {
      FamilyBuilder b = FamilyBuilder::parse(family_s);
      ordered_json ms = ordered_json::array();
      for (const auto& t : b.enumerate(GroundSet::parse(ground_s), count))
        ms.push_back(finset_json(t));
      ctx.out["members"] = std::move(ms);
    };
  });

  auto* lexrank = app.add_subcommand("lexrank", "ordinal position of a member");
  lexrank->add_option("family", family_s)->required();
  lexrank->add_option("finset", finset_s)->required();
  lexrank->add_option("--restrict", ground_s);
  lexrank->callback([&] {
    action = [&] {
      FamilyBuilder b = FamilyBuilder::parse(family_s);
      ctx.out["rank"] =
          b.lex_rank(FinSet::parse(finset_s), GroundSet::parse(ground_s)).str();
    };
  });

  auto* limit = app.add_subcommand("limit", "limit-point verdict with witnesses");
  limit->add_option("family", family_s)->required();
  limit->add_option("ground", ground_s)->required();
  limit->add_option("finset", finset_s)->required();
  limit->add_option("--witnesses", witnesses);
  limit->callback([&] {
    action = [&] {
      FamilyBuilder b = FamilyBuilder::parse(family_s);
      GroundSet m = GroundSet::parse(ground_s);
      FinSet t = FinSet::parse(finset_s);
      LimitVerdict v = is_limit_point(b, m, t);
      if (v.reason == LimitReason::min_too_small_unsupported)
        throw PrecondError("limit-point characterization requires min(t) > 1");
      auto ws = witness_oracle(b, m, t, witnesses);
      ctx.out["t"] = finset_json(t);
      ordered_json vj = verdict_json(v, &ws);
      for (auto& [k, val] : vj.items()) ctx.out[k] = val;
    };
  });

  auto* deriv = app.add_subcommand("deriv", "finite derivative membership");
  auto* dpow = deriv->add_subcommand("pow", "exact test for k-element families");
  dpow->add_option("k", kk)->required();
  dpow->add_option("ground", ground_s)->required();
  dpow->add_option("finset", finset_s)->required();
  dpow->add_option("level", level)->required();
  dpow->callback([&] {
    action = [&] {
      ctx.out["holds"] = finite_derivative_member_pow(
          kk, GroundSet::parse(ground_s), FinSet::parse(finset_s), level);
      ctx.out["level"] = level;
    };
  });
  auto* dsuff = deriv->add_subcommand("suff", "verified one-sided sufficiency");
  dsuff->add_option("family", family_s)->required();
  dsuff->add_option("ground", ground_s)->required();
  dsuff->add_option("finset", finset_s)->required();
  dsuff->add_option("level", level)->required();
  dsuff->callback([&] {
    action = [&] {
      ctx.out["holds"] = finite_derivative_sufficient(
          FamilyBuilder::parse(family_s), GroundSet::parse(ground_s),
          FinSet::parse(finset_s), level);
      ctx.out["level"] = level;
    };
  });

  auto* cb = app.add_subcommand("cbindex", "Cantor-Bendixson index results");
  auto* cbpow = cb->add_subcommand("pow", "index of a k-element family restriction");
  cbpow->add_option("k", kk)->required();
  cbpow->add_option("ground", ground_s)->required();
  cbpow->callback([&] {
    action = [&] {
      CbPowResult r = cb_index_pow(kk, GroundSet::parse(ground_s));
      ctx.out["k"] = r.k;
      ctx.out["index"] = r.index;
      ctx.out["certified"] = r.certified;
      ctx.out["level_lower"] = r.level_lower;
      ctx.out["level_upper"] = r.level_upper;
      ctx.out["clause_long_run"] = r.clause_long_run;
      ctx.out["clause_infinitely_many"] = r.clause_infinitely_many;
      ctx.out["violated"] = r.violated;
    };
  });
  auto* cbomega = cb->add_subcommand("omega", "equivalence at index omega");
  cbomega->add_option("family", family_s)->required();
  cbomega->add_option("ground", ground_s)->required();
  cbomega->callback([&] {
    action = [&] {
      ctx.out["is_omega"] = cb_index_omega(FamilyBuilder::parse(family_s),
                                           GroundSet::parse(ground_s));
    };
  });
  auto* cbadq = cb->add_subcommand("adequate", "index of an adequate restriction");
  cbadq->add_option("family", family_s)->required();
  cbadq->add_option("ground", ground_s)->required();
  cbadq->callback([&] {
    action = [&] {
      AdequacyTranscript t;
      Ordinal idx = cb_index_adequate(FamilyBuilder::parse(family_s),
                                      GroundSet::parse(ground_s), &t);
      ctx.out["cb_index"] = idx.str();
      ctx.out["transcript"] = transcript_json(t);
    };
  });

  auto* adq = app.add_subcommand("adequate", "adequacy decision with transcript");
  adq->add_option("family", family_s)->required();
  adq->add_option("ground", ground_s)->required();
  adq->add_option("--window", window);
  adq->callback([&] {
    action = [&] {
      FamilyBuilder b = FamilyBuilder::parse(family_s);
      GroundSet m = GroundSet::parse(ground_s);
      AdequacyTranscript t = is_adequate(b, m, window);
      ctx.out = transcript_json(t);
      if (b.uniform_rank() == Ordinal::omega())
        ctx.out["omega_adequate"] = is_omega_adequate(m);
    };
  });

  auto* etree = app.add_subcommand("etree", "tree validation, expansion, certificate");
  etree->add_option("family", family_s)->required();
  etree->add_option("schema", schema_s)->required();
  etree->add_option("--budget", budget);
  etree->callback([&] {
    action = [&] {
      FamilyBuilder b = FamilyBuilder::parse(family_s);
      FTreeSchema schema = FTreeSchema::load_file(schema_s);
      FTreeValidation v = validate_ftree(b, schema);
      ctx.out["valid"] = v.valid;
      ctx.out["violations"] = v.violations;
      if (v.valid) {
        ordered_json ex = ordered_json::array();
        for (const auto& c : et_expand(b, schema, budget))
          ex.push_back(finset_json(c));
        ctx.out["expanded"] = std::move(ex);
        ctx.out["certificate"] = transcript_json(et_adequate_certificate(b, schema));
        auto gs = et_groundset(b, schema);
        ctx.out["groundset"] = gs ? ordered_json(gs->str()) : ordered_json(nullptr);
      }
    };
  });

  auto* nw = app.add_subcommand("nwdemo", "a provably isolated member");
  nw->add_option("family", family_s)->required();
  nw->add_option("ground", ground_s)->required();
  nw->callback([&] {
    action = [&] {
      FamilyBuilder b = FamilyBuilder::parse(family_s);
      GroundSet m = GroundSet::parse(ground_s);
      FinSet t = nash_williams_demo(b, m);
      ctx.out["t"] = finset_json(t);
      LimitVerdict v = is_limit_point(b, m, t);
      ordered_json vj = verdict_json(v, nullptr);
      for (auto& [k, val] : vj.items()) ctx.out[k] = val;
    };
  });

  CliResult res;
  std::vector<const char*> argv;
  argv.push_back("ufam");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (action) action();
    std::ostringstream os;
    if (ctx.table)
      render_table(ctx.out, os);
    else
      os << ctx.out.dump() << "\n";
    res.out = os.str();
  } catch (const CLI::CallForHelp& e) {
    res.out = app.help();
  } catch (const CLI::ParseError& e) {
    res.code = 2;
    res.err = std::string("argument error: ") + e.what() + "\n";
  } catch (const ParseError& e) {
    res.code = 2;
    res.err = std::string("parse error: ") + e.what() + "\n";
  } catch (const RejectError& e) {
    res.code = 3;
    res.err = std::string("rejected ground set: ") + e.what() + "\n";
  } catch (const PrecondError& e) {
    res.code = 4;
    res.err = std::string("precondition violated: ") + e.what() + "\n";
  }
  return res;
}

}  // namespace ufam
