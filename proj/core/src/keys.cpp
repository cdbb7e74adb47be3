#include "qpv/keys.hpp"

#include <algorithm>
#include <cmath>

namespace qpv {

namespace {

constexpr const char* kNotOwner =
    "operation requires the register's classical description (owner custody)";

}  // namespace

PrivateKey::PrivateKey(int t, std::vector<std::uint64_t> s) : t_(t), s_(std::move(s)) {
    if (t_ < 1 || t_ > 62) {
        throw std::invalid_argument("PrivateKey: t must be in [1, 62]");
    }
    if (s_.empty()) {
        throw std::invalid_argument("PrivateKey: key string must be non-empty");
    }
    const std::uint64_t bound = std::uint64_t{1} << t_;
    for (std::uint64_t v : s_) {
        if (v >= bound) {
            throw std::invalid_argument("PrivateKey: s_i out of [0, 2^t)");
        }
    }
}

Angle PrivateKey::qubit_angle(std::size_t i) const {
    return static_cast<double>(s_.at(i)) * theta_step(t_);
}

Message::Message(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) {
        throw std::invalid_argument("Message: needs at least one bit");
    }
    for (std::uint8_t b : bits_) {
        if (b > 1) {
            throw std::invalid_argument("Message: bits must be 0 or 1");
        }
    }
}

Message Message::random(std::size_t r, Rng& rng) {
    std::vector<std::uint8_t> bits(r);
    for (auto& b : bits) {
        b = static_cast<std::uint8_t>(rng.bit());
    }
    return Message(std::move(bits));
}

Message Message::zeros(std::size_t r) {
    return Message(std::vector<std::uint8_t>(r, 0));
}

bool Message::all_zero() const noexcept {
    return std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b == 0; });
}

PublicKeyRegister PublicKeyRegister::prepare(const PrivateKey& key) {
    std::vector<QubitState> qubits;
    qubits.reserve(key.length());
    for (std::size_t i = 0; i < key.length(); ++i) {
        qubits.push_back(rotate(QubitState::zero(), key.qubit_angle(i)));
    }
    return PublicKeyRegister(std::move(qubits), Custody::owner);
}

QubitState PublicKeyRegister::qubit(std::size_t i) const {
    if (custody_ != Custody::owner) {
        throw CustodyError(kNotOwner);
    }
    return qubits_.at(i);
}

std::vector<PublicKeyRegister> PublicKeyRegister::copies(std::size_t n) const {
    if (custody_ != Custody::owner) {
        throw CustodyError(kNotOwner);
    }
    if (n < 1) {
        throw std::invalid_argument("copies: n must be at least 1");
    }
    return std::vector<PublicKeyRegister>(n, *this);
}

QubitState CipherRegister::qubit(std::size_t i) const {
    if (custody_ != Custody::owner) {
        throw CustodyError(kNotOwner);
    }
    return qubits_.at(i);
}

std::pair<PrivateKey, PublicKeyRegister> keygen(int T, int t, Rng& rng) {
    if (T < 1) {
        throw std::invalid_argument("keygen: T must be at least 1");
    }
    if (t < 1 || t > 62) {
        throw std::invalid_argument("keygen: t must be in [1, 62]");
    }
    const std::uint64_t bound = std::uint64_t{1} << t;
    std::vector<std::uint64_t> s(static_cast<std::size_t>(T));
    for (auto& v : s) {
        v = rng.uniform_below(bound);
    }
    PrivateKey key(t, std::move(s));
    PublicKeyRegister reg = PublicKeyRegister::prepare(key);
    return {std::move(key), std::move(reg)};
}

std::vector<PublicKeyRegister> copy_public_key(const PublicKeyRegister& pk, std::size_t n) {
    return pk.copies(n);
}

CipherRegister encrypt(const PublicKeyRegister& pk_copy, const Message& m,
                       CipherConvention convention) {
    const auto& qubits = detail::RegisterAccess::qubits(pk_copy);
    if (m.size() > qubits.size()) {
        throw std::invalid_argument("encrypt: message longer than register");
    }
    const double unit = convention == CipherConvention::literal_pi
                            ? std::numbers::pi
                            : std::numbers::pi / 2.0;
    std::vector<QubitState> out = qubits;
    for (std::size_t i = 0; i < m.size(); ++i) {
        out[i] = rotate(out[i], Angle{static_cast<double>(m.bit(i)) * unit});
    }
    return detail::RegisterAccess::make_cipher(std::move(out), pk_copy.custody());
}

Message decrypt_and_decode(const CipherRegister& cipher, const PrivateKey& key,
                           std::size_t r, Rng& rng) {
    const auto& qubits = detail::RegisterAccess::qubits(cipher);
    if (qubits.size() != key.length()) {
        throw std::invalid_argument("decrypt_and_decode: cipher/key length mismatch");
    }
    if (r < 1 || r > qubits.size()) {
        throw std::invalid_argument("decrypt_and_decode: r out of [1, T]");
    }
    std::vector<std::uint8_t> bits(r);
    for (std::size_t i = 0; i < r; ++i) {
        const QubitState plain = inverse_rotate(qubits[i], key.qubit_angle(i));
        bits[i] = static_cast<std::uint8_t>(measure_z(plain, rng));
    }
    return Message(std::move(bits));
}

double neighbor_distance(int t) {
    return std::abs(std::sin(theta_step(t).radians));
}

int measure_register_qubit(const PublicKeyRegister& reg, std::size_t i, Angle basis, Rng& rng) {
    return measure_in_basis(detail::RegisterAccess::qubits(reg).at(i), basis, rng);
}

int measure_register_qubit(const CipherRegister& reg, std::size_t i, Angle basis, Rng& rng) {
    return measure_in_basis(detail::RegisterAccess::qubits(reg).at(i), basis, rng);
}

}  // namespace qpv
