#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "hybridsec/ddpg.hpp"

namespace hybridsec {

// Binary checkpoint, little-endian, all reals as IEEE-754 binary64.
//
//   magic            8 bytes  "HYSECKPT"
//   version          u32      kCheckpointVersion
//   seed             u64
//   env_steps        i64
//   noise_std        f64
//   gradient_updates i64
//   episode_count    u32, then per episode: i32 episode, f64 discounted,
//                    f64 undiscounted, f64 mean_sum_rate, f64 noise_std
//   networks         actor, critic, actor_target, critic_target; each:
//                    u8 output activation, f64 output scale, u32 layer count,
//                    per layer u32 rows, u32 cols, rows*cols f64 weights in
//                    column-major order, rows f64 bias
//   adam             actor then critic; each: f64 lr, f64 beta1, f64 beta2,
//                    f64 epsilon, i64 step, first moment, second moment (both
//                    in the layer encoding above without the activation header)
//   replay buffer    u64 capacity, u64 head, u64 size, u64 slot count, then
//                    per slot: u32 n, n f64 state, f64 vx, f64 vy, f64 reward,
//                    u32 n, n f64 next state
//   agent rng        u32 length + text of the engine state
//   environment rng  u32 length + text of the engine state
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointCodec {
  static void write(std::ostream& out, const Trainer& trainer);
  static void read(std::istream& in, Trainer& trainer);
};

// Reads only the four networks and their optimizer states from a checkpoint.
DdpgNetworks load_networks(const std::filesystem::path& path);

}  // namespace hybridsec
