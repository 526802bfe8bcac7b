#include "emac/harness/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "emac/errors.hpp"
#include "emac/nn/serialize.hpp"

namespace emac::harness {
namespace {

constexpr const char* kMagic = "emac-checkpoint v1";
constexpr const char* kEndConfig = "end-config";

void write_role(std::ostream& out, const char* name, const marl::RoleNets& nets) {
  out << "role " << name << '\n';
  nn::write_mlp(out, nets.actor);
  nn::write_mlp(out, nets.critic);
  nn::write_mlp(out, nets.target_actor);
  nn::write_mlp(out, nets.target_critic);
}

void expect_line(std::istream& in, const std::string& expected) {
  std::string line;
  if (!std::getline(in, line) || line != expected) {
    throw std::runtime_error("checkpoint: expected '" + expected + "', got '" + line + "'");
  }
}

void read_role(std::istream& in, const char* name, marl::RoleNets& nets) {
  in >> std::ws;  // mlp dumps are token based and leave the line break behind
  expect_line(in, std::string("role ") + name);
  auto load = [&in](nn::Mlp& slot) {
    nn::Mlp mlp = nn::read_mlp(in);
    if (mlp.dims() != slot.dims()) throw ShapeError("checkpoint: network dims do not match config");
    slot = std::move(mlp);
  };
  load(nets.actor);
  load(nets.critic);
  load(nets.target_actor);
  load(nets.target_critic);
  nets.actor_opt = nn::make_adam_state(nets.actor);
  nets.critic_opt = nn::make_adam_state(nets.critic);
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint) {
  out << kMagic << '\n';
  out << "seed " << checkpoint.seed << '\n';
  write_config(out, checkpoint.config);
  out << kEndConfig << '\n';
  write_role(out, "ue", checkpoint.nets.ue);
  if (checkpoint.nets.bs) write_role(out, "bs", *checkpoint.nets.bs);
}

Checkpoint read_checkpoint(std::istream& in) {
  expect_line(in, kMagic);
  Checkpoint checkpoint;
  std::string line;
  if (!std::getline(in, line) || line.rfind("seed ", 0) != 0) {
    throw std::runtime_error("checkpoint: missing seed line");
  }
  try {
    std::size_t used = 0;
    checkpoint.seed = std::stoull(line.substr(5), &used);
    if (used != line.size() - 5) throw std::invalid_argument("trailing");
  } catch (const std::logic_error&) {
    throw std::runtime_error("checkpoint: bad seed '" + line + "'");
  }

  std::stringstream config_text;
  bool closed = false;
  while (std::getline(in, line)) {
    if (line == kEndConfig) {
      closed = true;
      break;
    }
    config_text << line << '\n';
  }
  if (!closed) throw std::runtime_error("checkpoint: unterminated config block");
  checkpoint.config = parse_config(config_text);

  // Shapes come from the config; the dumped weights then overwrite them.
  const marl::AgentLayout layout = marl::make_layout(checkpoint.config.sim, checkpoint.config.train);
  Rng unused(0);
  checkpoint.nets = marl::make_actor_critic(layout, checkpoint.config.train.hidden_units, unused);
  read_role(in, "ue", checkpoint.nets.ue);
  if (checkpoint.nets.bs) read_role(in, "bs", *checkpoint.nets.bs);
  return checkpoint;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
  write_checkpoint(out, checkpoint);
  out.flush();
  if (!out) throw std::runtime_error("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace emac::harness
