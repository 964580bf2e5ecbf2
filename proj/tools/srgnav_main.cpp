// srgnav: scene generation, SRG statistics, embedding training and
// navigation evaluation as one manifest-rooted pipeline.
//
//   srgnav generate --config cfg.json --workspace ws --scenes 30 --eval-scenes 5 --seed 7
//   srgnav trajectories --workspace ws
//   srgnav build-srg --workspace ws --prune-threshold 0.5
//   srgnav train --workspace ws --lr 0.0003 --epochs 400 --embed-dim 128 --seed 7
//   srgnav evaluate --workspace ws --policy all --episodes-per-scene 50
//   srgnav trace --workspace ws --policy srg_gcn --episode '<scene_id>#3'

#include <iostream>

#include <CLI11.hpp>

#include "srgnav/errors.hpp"
#include "srgnav/workspace.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spatial-relational-graph object-goal navigation pipeline"};
  app.require_subcommand(1);

  srgnav::GenerateOptions generate;
  auto* cmd_generate = app.add_subcommand("generate", "generate scenes and a manifest");
  cmd_generate->add_option("--config", generate.config_file, "scene-gen config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_generate->add_option("--workspace,-w", generate.workspace, "workspace directory")
      ->required();
  cmd_generate->add_option("--scenes", generate.scenes, "number of training scenes")
      ->required();
  cmd_generate->add_option("--eval-scenes", generate.eval_scenes,
                           "held-out scenes for evaluation");
  cmd_generate->add_option("--seed", generate.seed, "master seed");

  srgnav::TrajectoriesOptions trajectories;
  auto* cmd_trajectories =
      app.add_subcommand("trajectories", "build the valid-trajectory corpus");
  cmd_trajectories->add_option("--workspace,-w", trajectories.workspace, "workspace")
      ->required();

  srgnav::BuildSrgOptions build_srg;
  auto* cmd_build_srg =
      app.add_subcommand("build-srg", "aggregate scene graphs into the SRG");
  cmd_build_srg->add_option("--workspace,-w", build_srg.workspace, "workspace")->required();
  cmd_build_srg->add_option("--prune-threshold", build_srg.prune_threshold,
                            "edges with weight <= threshold are pruned for the GCN");

  srgnav::TrainOptions train;
  auto* cmd_train = app.add_subcommand("train", "train the GCN embeddings");
  cmd_train->add_option("--workspace,-w", train.workspace, "workspace")->required();
  cmd_train->add_option("--lr", train.learning_rate, "Adam learning rate");
  cmd_train->add_option("--epochs", train.epochs, "training epochs");
  cmd_train->add_option("--embed-dim", train.embed_dim, "embedding dimension");
  cmd_train->add_option("--hidden1", train.hidden1, "first hidden width");
  cmd_train->add_option("--hidden2", train.hidden2, "second hidden width");
  cmd_train->add_option("--seed", train.seed, "initialization seed");
  cmd_train->add_option("--plateau-patience", train.plateau_patience,
                        "early stop after this many epochs without improvement (0 = off)");

  srgnav::EvaluateOptions evaluate;
  auto* cmd_evaluate = app.add_subcommand("evaluate", "run navigation episodes");
  cmd_evaluate->add_option("--workspace,-w", evaluate.workspace, "workspace")->required();
  cmd_evaluate->add_option("--policy", evaluate.policy, "srg_gcn | random | greedy | all");
  cmd_evaluate->add_option("--episodes-per-scene", evaluate.episodes_per_scene,
                           "episodes per evaluation scene");
  cmd_evaluate->add_option("--k", evaluate.k_nearest, "candidate objects per posterior");
  cmd_evaluate->add_option("--max-steps", evaluate.max_steps, "step budget per episode");
  cmd_evaluate->add_option("--sense-radius", evaluate.sense_radius_m,
                           "visibility radius in meters");
  cmd_evaluate->add_flag("--history-score", evaluate.history_walk_score,
                         "blend similarity to the last traversed region into "
                         "region ranking (experimental)");
  cmd_evaluate->add_option("--seed", evaluate.seed, "episode sampling seed");
  cmd_evaluate->add_option("--workers", evaluate.workers, "episode worker threads");

  srgnav::TraceOptions trace;
  auto* cmd_trace = app.add_subcommand("trace", "print one episode's decision trace");
  cmd_trace->add_option("--workspace,-w", trace.workspace, "workspace")->required();
  cmd_trace->add_option("--policy", trace.policy, "policy whose log to read");
  cmd_trace->add_option("--episode", trace.episode_id, "episode id '<scene_id>#<index>'")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_generate->parsed()) srgnav::run_generate(generate, std::cout);
    if (cmd_trajectories->parsed()) srgnav::run_trajectories(trajectories, std::cout);
    if (cmd_build_srg->parsed()) srgnav::run_build_srg(build_srg, std::cout);
    if (cmd_train->parsed()) srgnav::run_train(train, std::cout);
    if (cmd_evaluate->parsed()) srgnav::run_evaluate(evaluate, std::cout);
    if (cmd_trace->parsed()) srgnav::run_trace(trace, std::cout);
  } catch (const srgnav::DependencyError& e) {
    std::cerr << "dependency error: " << e.what() << "\n";
    return 2;
  } catch (const srgnav::HashMismatchError& e) {
    std::cerr << "hash mismatch: " << e.what() << "\n";
    return 3;
  } catch (const srgnav::IoError& e) {
    std::cerr << "file error: " << e.what() << "\n";
    return 4;
  } catch (const srgnav::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
