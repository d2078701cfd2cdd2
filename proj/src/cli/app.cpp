#include "procrastimate/cli/app.hpp"

#include <pthread.h>
#include <signal.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "procrastimate/cli/bot.hpp"
#include "procrastimate/pack/customize.hpp"
#include "procrastimate/pack/pack_io.hpp"
#include "procrastimate/persistence/save_file.hpp"
#include "procrastimate/persistence/state_codec.hpp"
#include "procrastimate/proto/motivation.hpp"
#include "procrastimate/service/http_server.hpp"
#include "procrastimate/util/bundled.hpp"

namespace procrastimate::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string save_dir;
  std::string provider = "stub";
  std::string templates;
  bool verbose = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::optional<std::string> read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return text.str();
}

std::string require_text(const fs::path& path) {
  auto text = read_text(path);
  if (!text) throw UsageError("cannot read " + path.string());
  return *text;
}

StoryPack load_pack_arg(const std::string& path) {
  if (path.empty()) return reference_pack();
  return parse_pack(require_text(path));
}

std::shared_ptr<dialogue::Dialogue> make_dialogue(const Globals& g, std::ostream& err) {
  dialogue::LogSink log;
  if (g.verbose) log = [&err](std::string_view line) { err << "[llm] " << line << "\n"; };
  auto templates = g.templates.empty() ? dialogue::TemplateSet::bundled() : dialogue::TemplateSet::load_dir(g.templates);
  return std::make_shared<dialogue::Dialogue>(bundled_deck(), std::move(templates),
                                              dialogue::make_provider(g.provider, std::move(log)));
}

fs::path save_dir_of(const Globals& g) { return g.save_dir.empty() ? persist::default_save_dir() : fs::path(g.save_dir); }

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  const auto text = read_text(path);
  if (!text) {
    err << "error: cannot read " << path << "\n";
    return kExitUsage;
  }
  try {
    const StoryPack pack = parse_pack(*text);
    out << "valid: " << pack.pack_id << "\n";
    return kExitOk;
  } catch (const PackError& e) {
    for (const auto& d : e.diagnostics()) out << format_diagnostic(d) << "\n";
    return kExitFailure;
  }
}

struct PlayArgs {
  std::string pack_path;
  std::string bot;
  bool interactive = false;
  std::size_t max_actions = 100000;
  std::string session = "interactive";
  bool quiet = false;
};

int cmd_play_bot(const Globals& g, const PlayArgs& args, std::ostream& out, std::ostream& err) {
  const auto policy = parse_bot_policy(args.bot);
  if (!policy) throw UsageError("unknown bot policy '" + args.bot + "' (perfect, random, cause-only)");
  const StoryPack pack = load_pack_arg(args.pack_path);
  const auto dialogue = make_dialogue(g, err);

  PlayOptions options;
  options.session_id = "bot-" + std::string(to_string(*policy)) + "-" + std::to_string(g.seed);
  options.action_cap = args.max_actions;
  options.dialogue = dialogue.get();
  if (!args.quiet) options.on_line = [&out](const std::string& line) { out << line << "\n"; };
  const fs::path save = g.save_dir.empty() ? fs::path() : persist::save_path(g.save_dir, options.session_id);
  if (!save.empty()) {
    options.on_state = [&save](const GameState& state) {
      persist::save_state(state, save, {.saved_at = "1970-01-01T00:00:00Z", .after_temp_write = {}});
    };
  }

  const PlayReport report = play_bot(pack, *policy, g.seed, options);
  out << "--\n" << describe_state(report.final_state, pack);
  out << "adjudications: " << report.adjudications << " (" << report.wins << " won, " << report.losses
      << " lost), tone mismatches: " << report.tone_mismatches << "\n";
  if (report.deadlocked) {
    out << "result: deadlock (" << report.deadlock_reason << ")\n";
    out << persist::state_to_json(report.final_state).dump(2) << "\n";
    return kExitDeadlock;
  }
  if (report.capped) {
    out << "result: stopped at the action cap\n";
    return kExitCapped;
  }
  out << "result: completed\n";
  return kExitOk;
}

void print_case(const Case& c, std::ostream& out) {
  out << "case " << c.case_id << " (" << to_string(c.level) << ") " << c.npc.name;
  if (!c.npc.basic_info.empty()) out << ", " << c.npc.basic_info;
  out << "\n  " << c.narrative << "\n";
  if (c.level == CaseLevel::L0 && c.misconception) {
    out << "  labelled as: " << to_string(*c.misconception);
    if (c.punishment) out << ", punishment: " << *c.punishment;
    out << "\n";
  }
  if (c.level == CaseLevel::L1 && c.major_cause) out << "  major cause: " << to_string(*c.major_cause) << "\n";
}

void print_cards(const std::set<int>& cards, std::ostream& out) {
  for (int id : cards) {
    const auto& card = bundled_deck().card(id);
    out << "  " << id << " [" << to_string(card.cause()) << "] " << card.title << "\n";
  }
}

constexpr std::string_view kInteractiveHelp =
    "commands:\n"
    "  view                    progress summary and current case\n"
    "  hand | shop | cases     playable cards, shop listings, pending cases\n"
    "  choose <Cause> [case]   Level 0 diagnosis (SelfEfficacy, TaskValue, Impulsiveness, DistantDelay)\n"
    "  play <card> [case]      Level 1 strategy card\n"
    "  pair <a> <b> [case]     Level 2 merge\n"
    "  buy <card>              spend one Privilege Point\n"
    "  focus <case>            switch the current case\n"
    "  quit\n";

int cmd_play_interactive(const Globals& g, const PlayArgs& args, std::istream& in, std::ostream& out,
                         std::ostream& err) {
  if (!service::is_valid_session_id(args.session)) throw UsageError("invalid session name '" + args.session + "'");
  const StoryPack pack = load_pack_arg(args.pack_path);
  const auto dialogue = make_dialogue(g, err);
  const fs::path save = persist::save_path(save_dir_of(g), args.session);

  GameState state;
  if (fs::exists(save)) {
    state = persist::load_with_backup(save, &pack).state;
    out << "resumed " << args.session << " from " << save.string() << "\n";
  } else {
    state = rules::new_game(pack, args.session, g.seed);
  }
  out << kInteractiveHelp;

  auto current = [&]() -> std::string {
    const Case* c = rules::current_case(state, pack);
    return c != nullptr ? c->case_id : std::string();
  };

  std::string line;
  std::int64_t clock = static_cast<std::int64_t>(state.action_log.size());
  while (state.current_level != Level::Completed && (out << "> " << std::flush, std::getline(in, line))) {
    std::istringstream words(line);
    std::string command;
    words >> command;
    if (command.empty()) continue;
    if (command == "quit" || command == "exit") break;
    if (command == "help") {
      out << kInteractiveHelp;
      continue;
    }
    if (command == "view") {
      out << describe_state(state, pack);
      if (const Case* c = rules::current_case(state, pack)) print_case(*c, out);
      continue;
    }
    if (command == "hand") {
      print_cards(rules::playable_cards(state), out);
      continue;
    }
    if (command == "shop") {
      for (const auto& l : rules::shop_listings(state, pack)) {
        out << "  " << l.card_id << " " << bundled_deck().card(l.card_id).title << " (" << l.cost_points << " pt)\n";
      }
      continue;
    }
    if (command == "cases") {
      for (const Case* c : rules::pending_cases(state, pack)) print_case(*c, out);
      continue;
    }

    rules::Action action;
    std::string a, b, c;
    words >> a >> b >> c;
    try {
      if (command == "choose") {
        const auto cause = parse_cause(a);
        if (!cause) throw DomainError("UNKNOWN_CAUSE", "unknown cause '" + a + "'");
        action = rules::L0Choice{b.empty() ? current() : b, *cause};
      } else if (command == "play") {
        action = rules::PlayCard{b.empty() ? current() : b, std::stoi(a)};
      } else if (command == "pair") {
        action = rules::PlayPair{c.empty() ? current() : c, std::stoi(a), std::stoi(b)};
      } else if (command == "buy") {
        action = rules::BuyCard{std::stoi(a)};
      } else if (command == "focus") {
        action = rules::AdvanceCase{a};
      } else {
        out << "unknown command '" << command << "' (try help)\n";
        continue;
      }
    } catch (const std::logic_error&) {
      out << "expected a number\n";
      continue;
    } catch (const Error& e) {
      out << "rejected " << e.code() << ": " << e.what() << "\n";
      continue;
    }

    const std::uint64_t dseed = rules::dialogue_seed(state);
    dialogue::DialogueNarrator narrator(*dialogue);
    rules::ApplyResult applied;
    try {
      applied = rules::apply(state, pack, action, {++clock, &narrator});
    } catch (const Error& e) {
      out << "rejected " << e.code() << ": " << e.what() << "\n";
      continue;
    }
    state = std::move(applied.state);
    if (applied.outcome) {
      out << to_string(applied.outcome->result) << "\n";
      if (auto fb = service::adjudication_feedback(*dialogue, pack, action, applied.outcome->result, dseed)) {
        out << "[" << rules::to_string(fb->tone) << "] " << fb->speaker << ": " << fb->text << "\n";
      }
    } else {
      out << "ok\n";
    }
    for (const auto& r : narrator.responses()) out << "[" << dialogue::to_string(r.purpose) << "] " << r.text << "\n";
    persist::save_state(state, save);
  }
  persist::save_state(state, save);
  out << "\n" << describe_state(state, pack) << "saved to " << save.string() << "\n";
  return kExitOk;
}

struct ProtoArgs {
  std::string policy = "all";
  std::size_t n = 1000;
  bool floor_five = false;
  bool transcript = false;
};

int cmd_simulate_proto(const Globals& g, const ProtoArgs& args, std::ostream& out, std::ostream& err) {
  if (args.n == 0) throw UsageError("--n must be at least 1");
  std::vector<proto::Policy> policies;
  if (args.policy == "all") {
    policies = {proto::Policy::Perfect, proto::Policy::CauseOnly, proto::Policy::CardOnly, proto::Policy::Random};
  } else if (auto p = proto::parse_policy(args.policy)) {
    policies = {*p};
  } else {
    throw UsageError("unknown policy '" + args.policy + "' (perfect, cause-only, card-only, random, all)");
  }
  const proto::RuleVariant variant{args.floor_five};
  std::vector<proto::SimulationSummary> rows;
  for (auto policy : policies) rows.push_back(proto::simulate(policy, args.n, g.seed, variant));
  out << proto::format_summary_table(rows);

  if (args.transcript) {
    const auto dialogue = make_dialogue(g, err);
    const auto session = proto::simulate_one(policies.front(), 0, g.seed, variant);
    out << "\nstory " << session.story.story_id << " (hidden cause " << to_string(session.story.true_cause)
        << "): " << session.story.text << "\n";
    for (std::size_t i = 0; i < session.turn_log.size(); ++i) {
      const auto& turn = session.turn_log[i];
      out << "turn " << (i + 1) << ": declared " << to_string(turn.declared_cause) << ", card " << turn.card_id
          << " -> +" << turn.delta << " = " << turn.motivation_after << "%\n";
      const auto voices = dialogue->generate_dual_voice(session.story.text, turn.declared_cause, turn.card_id,
                                                        turn.delta, turn.motivation_after, mix_seed(g.seed, i));
      out << "  " << voices.motivational.text << "\n  " << voices.procrastinating.text << "\n";
    }
    out << (proto::is_won(session) ? "won" : "not won") << " after " << session.turn_log.size() << " turns\n";
  }
  return kExitOk;
}

struct ServeArgs {
  std::string address = "127.0.0.1";
  std::uint16_t port = 8080;
  std::string packs_dir;
};

int cmd_serve(const Globals& g, const ServeArgs& args, std::ostream& out, std::ostream& err) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  auto packs = service::PackRegistry::with_reference();
  if (!args.packs_dir.empty()) packs.load_dir(args.packs_dir);
  service::ServiceConfig config;
  config.save_dir = save_dir_of(g);
  service::SessionService svc(std::move(packs), make_dialogue(g, err), config);
  const std::size_t restored = svc.recover();

  service::HttpServer server(svc, {args.address, args.port});
  const auto port = server.start();
  out << "listening on http://" << args.address << ":" << port << " (save dir " << config.save_dir.string() << ", "
      << restored << " sessions restored)" << std::endl;

  int received = 0;
  sigwait(&signals, &received);
  server.stop();
  svc.flush_all();
  out << "stopped" << std::endl;
  return kExitOk;
}

struct CustomizeArgs {
  std::string stories;
  std::string pool;
  std::string pack;
  std::string output;
};

int cmd_customize(const Globals& g, const CustomizeArgs& args, std::ostream& out) {
  const auto stories = parse_personal_stories(require_text(args.stories));
  const auto pool = args.pool.empty() ? parse_case_pool(bundled::shared_pool_json()) : parse_case_pool(require_text(args.pool));
  const StoryPack base = load_pack_arg(args.pack);
  const StoryPack custom = customize_pack(base, stories, pool, g.seed);
  const std::string text = serialize_pack(custom);
  if (args.output.empty()) {
    out << text;
  } else {
    persist::write_atomically(args.output, text, false);
    out << "wrote " << args.output << " (" << stories.size() << " personal, " << (8 - stories.size())
        << " pool cases)\n";
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"ProcrastiMate: a serious game about overcoming procrastination", "procrastimate"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--save-dir", g.save_dir, "Directory for save files");
  app.add_option("--provider", g.provider, "Dialogue provider")
      ->check(CLI::IsMember({"stub", "remote"}))
      ->capture_default_str();
  app.add_option("--templates", g.templates, "Directory of prompt templates overriding the bundled ones");
  app.add_flag("-v,--verbose", g.verbose, "Log provider traffic to stderr");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Validate a story pack");
  validate->add_option("pack", validate_path, "Pack JSON file")->required();

  PlayArgs play_args;
  auto* play = app.add_subcommand("play", "Play a pack headless (bot) or from standard input");
  play->add_option("pack", play_args.pack_path, "Pack JSON file (bundled reference pack when omitted)");
  auto* bot_opt = play->add_option("--bot", play_args.bot, "Bot policy: perfect, random, cause-only");
  auto* interactive_opt = play->add_flag("--interactive", play_args.interactive, "Read commands from stdin");
  bot_opt->excludes(interactive_opt);
  play->add_option("--max-actions", play_args.max_actions, "Bot action cap")->capture_default_str();
  play->add_option("--session", play_args.session, "Interactive session name")->capture_default_str();
  play->add_flag("--quiet", play_args.quiet, "Print only the final summary");

  ProtoArgs proto_args;
  auto* simulate = app.add_subcommand("simulate-proto", "Simulate the motivation prototype");
  simulate->add_option("--policy", proto_args.policy, "perfect, cause-only, card-only, random or all")
      ->capture_default_str();
  simulate->add_option("--n", proto_args.n, "Runs per policy")->capture_default_str();
  simulate->add_flag("--floor-five", proto_args.floor_five, "Both-wrong turns still give +5");
  simulate->add_flag("--transcript", proto_args.transcript, "Print a dual-voice transcript of one run");

  ServeArgs serve_args;
  auto* serve = app.add_subcommand("serve", "Run the HTTP/WebSocket session service");
  serve->add_option("--address", serve_args.address)->capture_default_str();
  serve->add_option("--port", serve_args.port)->capture_default_str();
  serve->add_option("--packs-dir", serve_args.packs_dir, "Extra packs to serve");

  CustomizeArgs customize_args;
  auto* customize = app.add_subcommand("customize", "Build a pack with personal Level-2 stories");
  customize->add_option("--stories", customize_args.stories, "Personal stories JSON")->required();
  customize->add_option("--pool", customize_args.pool, "Shared case pool JSON (bundled when omitted)");
  customize->add_option("--pack", customize_args.pack, "Base pack (bundled reference when omitted)");
  customize->add_option("-o,--output", customize_args.output, "Write the pack here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(validate_path, out, err);
    if (*play) {
      if (play_args.interactive) return cmd_play_interactive(g, play_args, in, out, err);
      if (play_args.bot.empty()) throw UsageError("play needs --bot <policy> or --interactive");
      return cmd_play_bot(g, play_args, out, err);
    }
    if (*simulate) return cmd_simulate_proto(g, proto_args, out, err);
    if (*serve) return cmd_serve(g, serve_args, out, err);
    if (*customize) return cmd_customize(g, customize_args, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PackError& e) {
    for (const auto& d : e.diagnostics()) err << format_diagnostic(d) << "\n";
    return kExitFailure;
  } catch (const Error& e) {
    err << "error " << e.code() << ": " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace procrastimate::cli
