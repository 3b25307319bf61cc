#!/usr/bin/env python3
# Copyright 2026 The bcsse Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent reference values for the keyed primitives and encodings.

Built only from hashlib/hmac and the `cryptography` package. AES-SIV is
computed twice, once with AESSIV and once from CMAC + AES-CTR by hand, and
the two must agree before anything is written.

    python3 tests/oracle/gen_vectors.py > tests/vectors/crypto_v1.json
"""

import hashlib
import hmac
import json
import struct
import sys

from cryptography.hazmat.primitives import cmac
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes
from cryptography.hazmat.primitives.ciphers.aead import AESGCM, AESSIV
from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat


def h(b):
    return b.hex()


def hmac256(key, msg):
    return hmac.new(key, msg, hashlib.sha256).digest()


class Drbg:
    def __init__(self, seed):
        self.seed = seed
        self.counter = 0
        self.buf = b""

    def take(self, n):
        while len(self.buf) < n:
            self.buf += hmac256(self.seed, b"bcsse/drbg/v1" + struct.pack(">Q", self.counter))
            self.counter += 1
        out, self.buf = self.buf[:n], self.buf[n:]
        return out


def prf(index, key, data):
    return hmac256(key, bytes([index]) + data)[: len(key)]


def keyed_hash(key, msg):
    return hmac256(key, msg)[: len(key)]


def siv_key(key):
    out = b""
    i = 1
    while len(out) < 2 * len(key):
        out += hmac256(key, b"bcsse/siv/v1" + bytes([i]))
        i += 1
    return out[: 2 * len(key)]


def _cmac(key, msg):
    c = cmac.CMAC(algorithms.AES(key))
    c.update(msg)
    return c.finalize()


def _dbl(block):
    n = int.from_bytes(block, "big") << 1
    if n >> 128:
        n ^= (1 << 128) | 0x87
    return n.to_bytes(16, "big")


def _xor(a, b):
    return bytes(x ^ y for x, y in zip(a, b))


def siv_by_hand(key, plaintext):
    """RFC 5297 SIV with no associated data."""
    k1, k2 = key[: len(key) // 2], key[len(key) // 2 :]
    d = _cmac(k1, bytes(16))
    if len(plaintext) >= 16:
        t = plaintext[:-16] + _xor(plaintext[-16:], d)
    else:
        padded = plaintext + b"\x80" + bytes(15 - len(plaintext))
        t = _xor(_dbl(d), padded)
    v = _cmac(k1, t)
    q = bytearray(v)
    q[8] &= 0x7F
    q[12] &= 0x7F
    ctr = Cipher(algorithms.AES(k2), modes.CTR(bytes(q))).encryptor()
    return v + ctr.update(plaintext) + ctr.finalize()


def det_encrypt(key, plaintext):
    k = siv_key(key)
    a = AESSIV(k).encrypt(plaintext, None)
    b = siv_by_hand(k, plaintext)
    assert a == b, "AESSIV and hand-built SIV disagree"
    return a


def sym_encrypt(key, plaintext, drbg):
    nonce = drbg.take(12)
    return nonce + AESGCM(key).encrypt(nonce, plaintext, None)


def u32(v):
    return struct.pack(">I", v)


def u64(v):
    return struct.pack(">Q", v)


def blob(b):
    return u32(len(b)) + b


def tx_body(inputs, outputs, locktime, nonce):
    out = u32(1) + u32(len(inputs))
    for txid, idx in inputs:
        out += blob(txid) + u32(idx)
    out += u32(len(outputs))
    for value, vk, payload in outputs:
        out += u64(value) + bytes([1]) + vk
        if payload is None:
            out += bytes([0])
        else:
            kind, data = payload
            out += bytes([1, kind]) + blob(data)
    return out + u64(locktime) + u64(nonce)


def ed25519(seed, msg):
    sk = Ed25519PrivateKey.from_private_bytes(seed)
    vk = sk.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)
    return vk, sk.sign(b"bcsse/sig/v1" + msg)


def main():
    v = {"version": 1}

    v["drbg"] = []
    for seed in [b"bcsse-test-seed", bytes(range(32))]:
        v["drbg"].append({"seed": h(seed), "out": h(Drbg(seed).take(80))})

    v["gen"] = []
    for bits, seed in [(128, b"gen-seed-128-bits"), (256, bytes(range(100, 132)))]:
        d = Drbg(seed)
        k1 = d.take(bits // 8)
        k2 = d.take(bits // 8)
        v["gen"].append({"bits": bits, "seed": h(seed), "k1": h(k1), "k2": h(k2)})

    key16 = bytes(range(16))
    key32 = bytes(range(32, 64))
    v["prf"] = []
    for key in (key16, key32):
        for index in (1, 2, 3):
            for data in (b"", b"w", b"keyword", bytes(32)):
                v["prf"].append({"index": index, "key": h(key), "input": h(data), "out": h(prf(index, key, data))})

    v["keyed_hash"] = []
    for key in (key16, key32):
        for msg in (b"", b"abc", bytes(range(200))):
            v["keyed_hash"].append({"key": h(key), "msg": h(msg), "out": h(keyed_hash(key, msg))})

    v["det"] = []
    for key in (key16, key32):
        for n in (0, 1, 15, 16, 17, 64, 100):
            pt = bytes((7 * i + 3) & 0xFF for i in range(n))
            v["det"].append({"key": h(key), "pt": h(pt), "ct": h(det_encrypt(key, pt))})

    v["sym"] = []
    for key in (key16, key32):
        for n in (0, 5, 40):
            seed = b"nonce-seed-" + bytes([n, len(key)])
            pt = bytes((11 * i + 1) & 0xFF for i in range(n))
            v["sym"].append({"key": h(key), "seed": h(seed), "pt": h(pt), "ct": h(sym_encrypt(key, pt, Drbg(seed)))})

    v["ed25519"] = []
    for seed, msg in [(bytes(32), b""), (bytes(range(32)), b"transaction body")]:
        vk, sig = ed25519(seed, msg)
        v["ed25519"].append({"seed": h(seed), "msg": h(msg), "vk": h(vk), "sig": h(sig)})

    vk_a = ed25519(bytes(range(32)), b"")[0]
    vk_b = ed25519(bytes(32), b"")[0]
    prev = hashlib.sha256(b"previous").digest()
    body = tx_body([(prev, 1)], [(700, vk_a, None), (300, vk_b, (0, b"embedded"))], 42, 0)
    v["txid"] = {
        "prev": h(prev),
        "prev_index": 1,
        "vk_a": h(vk_a),
        "vk_b": h(vk_b),
        "body": h(body),
        "txid256": h(hashlib.sha256(body).digest()),
        "txid64": h(hashlib.sha256(body).digest()[:8]),
    }

    v["tokens"] = []
    for k2, p in [(key16, 8), (key32, 32)]:
        for w in (b"alpha", b"beta"):
            v["tokens"].append({
                "k2": h(k2), "keyword": w.decode(), "txid_bytes": p,
                "t": h(prf(1, k2, w)), "l": h(prf(2, k2, w)), "k": h(prf(3, k2, w)),
                "k11": h(prf(2, k2, bytes(p))),
            })

    # One index entry: two matching documents, padded to three slots.
    k2 = key32
    docs = [bytes([0xC1]) * 30, bytes([0xC2]) * 45]
    ids = [hashlib.sha256(b"doc1").digest(), hashlib.sha256(b"doc2").digest()]
    listing = ids[0] + ids[1] + bytes(32)
    t, l, k = prf(1, k2, b"beta"), prf(2, k2, b"beta"), prf(3, k2, b"beta")
    v["entry"] = {
        "k2": h(k2), "keyword": "beta",
        "doc_txids": [h(i) for i in ids], "ciphertexts": [h(c) for c in docs], "delta": 3,
        "t": h(t), "e": h(det_encrypt(l, listing)), "h": h(keyed_hash(k, docs[0] + docs[1])),
    }

    json.dump(v, sys.stdout, indent=1, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
