#include <benchmark/benchmark.h>

#include "qpv/adversary.hpp"
#include "qpv/protocol.hpp"

using namespace qpv;

static void ChainedRotations(benchmark::State& state) {
    Rng rng(1);
    QubitState q = QubitState::zero();
    const Angle a{0.3};
    for (auto _ : state) {
        q = rotate(q, a);
        benchmark::DoNotOptimize(q);
    }
}
BENCHMARK(ChainedRotations);

static void EncryptDecryptRoundTrip(benchmark::State& state) {
    const int T = static_cast<int>(state.range(0));
    Rng rng(7);
    for (auto _ : state) {
        Rng kr = rng.split();
        Rng mr = rng.split();
        Rng dr = rng.split();
        const auto [key, pk] = keygen(T, 10, kr);
        const Message m = Message::random(static_cast<std::size_t>(T) / 2, mr);
        const Message out = decrypt_and_decode(encrypt(pk, m), key, m.size(), dr);
        benchmark::DoNotOptimize(out);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(EncryptDecryptRoundTrip)->RangeMultiplier(2)->Range(8, 256)->Complexity();

static void CipherMixtures(benchmark::State& state) {
    const int t = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cipher_mixtures(t, 0));
    }
}
BENCHMARK(CipherMixtures)->DenseRange(4, 16, 4);

static void HonestProtocolRound(benchmark::State& state) {
    ProtocolConfig config;
    config.T = 32;
    config.t = 10;
    config.message_lengths = {16};
    config.geometry = make_ring_scenario(static_cast<int>(state.range(0)), 3.0e5);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        config.seed = seed++;
        benchmark::DoNotOptimize(run_honest(config));
    }
}
BENCHMARK(HonestProtocolRound)->Arg(1)->Arg(3)->Arg(8);

static void GuessAttackTrials(benchmark::State& state) {
    ProtocolConfig config;
    config.T = 8;
    config.t = 6;
    config.message_lengths = {4};
    config.geometry = make_ring_scenario(2, 3.0e5);
    config.seed = 3;
    AttackSpec spec;
    spec.strategy = "guess";
    spec.trials = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_with_adversary(config, spec));
    }
}
BENCHMARK(GuessAttackTrials)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
