#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qpv/qubit.hpp"
#include "qpv/rng.hpp"

namespace qpv {

class Message;
class PublicKeyRegister;
class CipherRegister;

// Thrown when code tries an operation reserved for the party that knows a
// register's classical description (copying, amplitude peeking).
class CustodyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Who holds a register. The owner prepared it and knows its classical
// description, so may copy it and peek at amplitudes. A bearer holds the
// physical qubits only: rotations and measurements work, copying and
// peeking do not. This turns no-cloning of unknown states into a testable
// API contract instead of un-modellable physics.
enum class Custody { owner, bearer };

// Classical private key: precision exponent t and an integer string S of
// length T with each s_i in [0, 2^t).
class PrivateKey {
public:
    PrivateKey(int t, std::vector<std::uint64_t> s);

    int precision() const noexcept { return t_; }
    std::size_t length() const noexcept { return s_.size(); }
    std::uint64_t s(std::size_t i) const { return s_.at(i); }
    const std::vector<std::uint64_t>& string() const noexcept { return s_; }

    // Rotation angle s_i * pi / 2^t encoding position i of the key.
    Angle qubit_angle(std::size_t i) const;

private:
    int t_;
    std::vector<std::uint64_t> s_;
};

// Message of r bits, each 0 or 1, 1 <= r.
class Message {
public:
    explicit Message(std::vector<std::uint8_t> bits);
    static Message random(std::size_t r, Rng& rng);
    static Message zeros(std::size_t r);

    std::size_t size() const noexcept { return bits_.size(); }
    std::uint8_t bit(std::size_t i) const { return bits_.at(i); }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
    bool all_zero() const noexcept;

    friend bool operator==(const Message&, const Message&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

namespace detail {
struct RegisterAccess;  // internal physics/serialization shim
}

// T-qubit product register: qubit i = rotate(|0>, s_i * theta_t). Clonable
// by its owner only; the register itself stores amplitudes, never (t, S).
class PublicKeyRegister {
public:
    static PublicKeyRegister prepare(const PrivateKey& key);

    std::size_t size() const noexcept { return qubits_.size(); }
    Custody custody() const noexcept { return custody_; }

    // The same physical register as seen by a receiving party.
    PublicKeyRegister handover() const { return PublicKeyRegister(qubits_, Custody::bearer); }

    // Owner-only amplitude peek.
    QubitState qubit(std::size_t i) const;

    // Owner-only value copies (the owner knows the state, so may re-prepare).
    std::vector<PublicKeyRegister> copies(std::size_t n) const;

private:
    PublicKeyRegister(std::vector<QubitState> qubits, Custody custody)
        : qubits_(std::move(qubits)), custody_(custody) {}

    std::vector<QubitState> qubits_;
    Custody custody_;

    friend struct detail::RegisterAccess;
};

// Output of encryption: first r qubits carry message rotations, the rest
// pass through untouched. Custody follows the public-key copy it was made
// from; nobody but the original key owner can peek.
class CipherRegister {
public:
    std::size_t size() const noexcept { return qubits_.size(); }
    Custody custody() const noexcept { return custody_; }
    CipherRegister handover() const { return CipherRegister(qubits_, Custody::bearer); }
    QubitState qubit(std::size_t i) const;

private:
    CipherRegister(std::vector<QubitState> qubits, Custody custody)
        : qubits_(std::move(qubits)), custody_(custody) {}

    std::vector<QubitState> qubits_;
    Custody custody_;

    friend struct detail::RegisterAccess;
};

namespace detail {
// Single internal gateway to register internals. Library physics
// (encryption, decryption, in-flight measurement) and serialization go
// through here; model-facing code must use the public, custody-gated API.
struct RegisterAccess {
    static const std::vector<QubitState>& qubits(const PublicKeyRegister& r) { return r.qubits_; }
    static const std::vector<QubitState>& qubits(const CipherRegister& r) { return r.qubits_; }
    static PublicKeyRegister make_public_key(std::vector<QubitState> q, Custody c) {
        return PublicKeyRegister(std::move(q), c);
    }
    static CipherRegister make_cipher(std::vector<QubitState> q, Custody c) {
        return CipherRegister(std::move(q), c);
    }
};
}  // namespace detail

// Message rotation convention. quarter_turn encodes bit 1 as an amplitude
// rotation of pi/2, which decryption maps exactly onto |1>. literal_pi
// rotates by pi instead; that is a global sign flip, carries no information,
// and is kept only to demonstrate the failure (see README).
enum class CipherConvention { quarter_turn, literal_pi };

// Sample S uniformly from [0, 2^t)^T and prepare the matching register.
// Deterministic given the rng state. Throws on T < 1 or t outside [1, 62].
std::pair<PrivateKey, PublicKeyRegister> keygen(int T, int t, Rng& rng);

// n independent value copies. Owner-only; throws CustodyError for bearers.
std::vector<PublicKeyRegister> copy_public_key(const PublicKeyRegister& pk, std::size_t n);

// Qubit i < r rotated by m_i * pi/2 (or m_i * pi under literal_pi); the
// remaining qubits are copied bit for bit. Throws when r > T.
CipherRegister encrypt(const PublicKeyRegister& pk_copy, const Message& m,
                       CipherConvention convention = CipherConvention::quarter_turn);

// Inverse-rotate every qubit by s_i * theta_t, then measure the first r in
// the Z basis. Honest ciphers decode to the sent message; tampered ones are
// allowed and simply decode to whatever the Born rule gives.
Message decrypt_and_decode(const CipherRegister& cipher, const PrivateKey& key,
                           std::size_t r, Rng& rng);

// Distance between adjacent key states, |sin(pi / 2^t)|.
double neighbor_distance(int t);

// Projective measurement of one register qubit in the basis rotated by
// `basis`. Physical operation: works under any custody.
int measure_register_qubit(const PublicKeyRegister& reg, std::size_t i, Angle basis, Rng& rng);
int measure_register_qubit(const CipherRegister& reg, std::size_t i, Angle basis, Rng& rng);

}  // namespace qpv
