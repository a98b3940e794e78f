#include "hybridsec/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hybridsec/errors.hpp"

namespace hybridsec {

static_assert(std::endian::native == std::endian::little, "checkpoint codec assumes little-endian");

std::string serialize_rng(const Rng& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

Rng deserialize_rng(const std::string& text) {
  std::istringstream is(text);
  Rng rng;
  is >> rng;
  if (!is) throw IoError("corrupt random engine state");
  return rng;
}

namespace {

constexpr std::array<char, 8> kMagic{'H', 'Y', 'S', 'E', 'C', 'K', 'P', 'T'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename T>
  void pod(T value) {
    out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
  }
  void reals(const double* data, std::size_t n) {
    out_.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
  }
  void text(const std::string& s) {
    pod(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void layers(const std::vector<DenseLayer>& ls) {
    pod(static_cast<std::uint32_t>(ls.size()));
    for (const auto& l : ls) {
      pod(static_cast<std::uint32_t>(l.weight.rows()));
      pod(static_cast<std::uint32_t>(l.weight.cols()));
      reals(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
      reals(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
    }
  }
  void net(const MlpParams& n) {
    pod(static_cast<std::uint8_t>(n.output));
    pod(n.output_scale);
    layers(n.layers);
  }
  void adam(const AdamState& a) {
    pod(a.config.learning_rate);
    pod(a.config.beta1);
    pod(a.config.beta2);
    pod(a.config.epsilon);
    pod(a.step);
    layers(a.first_moment.layers);
    layers(a.second_moment.layers);
  }
  void vec(const std::vector<double>& v) {
    pod(static_cast<std::uint32_t>(v.size()));
    reals(v.data(), v.size());
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <typename T>
  T pod() {
    T value{};
    in_.read(reinterpret_cast<char*>(&value), sizeof(T));
    check();
    return value;
  }
  void reals(double* data, std::size_t n) {
    in_.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
    check();
  }
  std::string text() {
    const auto n = pod<std::uint32_t>();
    std::string s(n, '\0');
    in_.read(s.data(), n);
    check();
    return s;
  }
  std::vector<DenseLayer> layers() {
    const auto count = pod<std::uint32_t>();
    std::vector<DenseLayer> ls(count);
    for (auto& l : ls) {
      const auto rows = pod<std::uint32_t>();
      const auto cols = pod<std::uint32_t>();
      l.weight.resize(rows, cols);
      l.bias.resize(rows);
      reals(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
      reals(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
    }
    return ls;
  }
  MlpParams net() {
    MlpParams n;
    const auto act = pod<std::uint8_t>();
    if (act > 1) throw IoError("checkpoint: unknown output activation");
    n.output = static_cast<OutputActivation>(act);
    n.output_scale = pod<double>();
    n.layers = layers();
    return n;
  }
  AdamState adam() {
    AdamState a;
    a.config.learning_rate = pod<double>();
    a.config.beta1 = pod<double>();
    a.config.beta2 = pod<double>();
    a.config.epsilon = pod<double>();
    a.step = pod<std::int64_t>();
    a.first_moment.layers = layers();
    a.second_moment.layers = layers();
    return a;
  }
  std::vector<double> vec() {
    const auto n = pod<std::uint32_t>();
    std::vector<double> v(n);
    reals(v.data(), n);
    return v;
  }

 private:
  void check() {
    if (!in_) throw IoError("checkpoint is truncated or unreadable");
  }
  std::istream& in_;
};

void write_header(Writer& w) {
  for (char c : kMagic) w.pod(c);
  w.pod(kCheckpointVersion);
}

void read_header(Reader& r) {
  for (char c : kMagic)
    if (r.pod<char>() != c) throw IoError("not a hybridsec checkpoint");
  const auto version = r.pod<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw IoError("unsupported checkpoint version " + std::to_string(version));
}

void write_networks(Writer& w, const DdpgNetworks& n) {
  w.net(n.actor);
  w.net(n.critic);
  w.net(n.actor_target);
  w.net(n.critic_target);
  w.adam(n.actor_adam);
  w.adam(n.critic_adam);
}

DdpgNetworks read_networks(Reader& r) {
  DdpgNetworks n;
  n.actor = r.net();
  n.critic = r.net();
  n.actor_target = r.net();
  n.critic_target = r.net();
  n.actor_adam = r.adam();
  n.critic_adam = r.adam();
  return n;
}

struct Preamble {
  std::uint64_t seed;
  std::int64_t env_steps;
  double noise_std;
  TrainingLog log;
};

Preamble read_preamble(Reader& r) {
  read_header(r);
  Preamble p;
  p.seed = r.pod<std::uint64_t>();
  p.env_steps = r.pod<std::int64_t>();
  p.noise_std = r.pod<double>();
  p.log.gradient_updates = r.pod<std::int64_t>();
  const auto episodes = r.pod<std::uint32_t>();
  p.log.episodes.resize(episodes);
  for (auto& e : p.log.episodes) {
    e.episode = r.pod<std::int32_t>();
    e.discounted_return = r.pod<double>();
    e.undiscounted_return = r.pod<double>();
    e.mean_sum_rate = r.pod<double>();
    e.noise_std = r.pod<double>();
  }
  return p;
}

}  // namespace

void CheckpointCodec::write(std::ostream& out, const Trainer& t) {
  Writer w(out);
  write_header(w);
  w.pod(t.seed_);
  w.pod(t.env_steps_);
  w.pod(t.noise_std_);
  w.pod(t.log_.gradient_updates);
  w.pod(static_cast<std::uint32_t>(t.log_.episodes.size()));
  for (const auto& e : t.log_.episodes) {
    w.pod(static_cast<std::int32_t>(e.episode));
    w.pod(e.discounted_return);
    w.pod(e.undiscounted_return);
    w.pod(e.mean_sum_rate);
    w.pod(e.noise_std);
  }
  write_networks(w, t.nets_);

  const ReplayBuffer& b = t.buffer_;
  w.pod(static_cast<std::uint64_t>(b.capacity_));
  w.pod(static_cast<std::uint64_t>(b.head_));
  w.pod(static_cast<std::uint64_t>(b.size_));
  w.pod(static_cast<std::uint64_t>(b.slots_.size()));
  for (const auto& tr : b.slots_) {
    w.vec(tr.state);
    w.pod(tr.action.vx);
    w.pod(tr.action.vy);
    w.pod(tr.reward);
    w.vec(tr.next_state);
  }
  w.text(serialize_rng(t.agent_rng_));
  w.text(serialize_rng(t.env_rng_));
  if (!out) throw IoError("failed to write checkpoint");
}

void CheckpointCodec::read(std::istream& in, Trainer& t) {
  Reader r(in);
  Preamble p = read_preamble(r);
  DdpgNetworks nets = read_networks(r);
  if (nets.actor.sizes() != t.nets_.actor.sizes() || nets.critic.sizes() != t.nets_.critic.sizes())
    throw ConfigError("checkpoint network shapes do not match the configuration");

  ReplayBuffer buffer(static_cast<std::size_t>(r.pod<std::uint64_t>()));
  buffer.head_ = static_cast<std::size_t>(r.pod<std::uint64_t>());
  buffer.size_ = static_cast<std::size_t>(r.pod<std::uint64_t>());
  const auto slots = r.pod<std::uint64_t>();
  if (slots > buffer.capacity_ || buffer.size_ != slots || buffer.head_ >= buffer.capacity_)
    throw IoError("checkpoint replay buffer is inconsistent");
  for (std::uint64_t i = 0; i < slots; ++i) {
    Transition tr;
    tr.state = r.vec();
    tr.action.vx = r.pod<double>();
    tr.action.vy = r.pod<double>();
    tr.reward = r.pod<double>();
    tr.next_state = r.vec();
    buffer.slots_.push_back(std::move(tr));
  }
  Rng agent_rng = deserialize_rng(r.text());
  Rng env_rng = deserialize_rng(r.text());

  t.seed_ = p.seed;
  t.env_steps_ = p.env_steps;
  t.noise_std_ = p.noise_std;
  t.log_ = std::move(p.log);
  t.nets_ = std::move(nets);
  t.buffer_ = std::move(buffer);
  t.agent_rng_ = agent_rng;
  t.env_rng_ = env_rng;
}

void Trainer::save_checkpoint(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  CheckpointCodec::write(out, *this);
}

Trainer Trainer::load_checkpoint(const std::filesystem::path& path, EnvConfig env_config,
                                 AgentConfig agent_config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  agent_config.warm_start.clear();
  Trainer trainer(std::move(env_config), std::move(agent_config), 0);
  CheckpointCodec::read(in, trainer);
  return trainer;
}

DdpgNetworks load_networks(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  Reader r(in);
  read_preamble(r);
  return read_networks(r);
}

}  // namespace hybridsec
