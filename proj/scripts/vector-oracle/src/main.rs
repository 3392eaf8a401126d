//! Test vector generator. Emits JSON files under tests/vectors/ from an
//! independent implementation of BLS12-381. The outputs are committed and the
//! C++ test suite treats them as frozen expectations.

use bls12_381::hash_to_curve::{ExpandMsgXmd, HashToCurve};
use bls12_381::{G1Affine, G1Projective, G2Affine, G2Projective, Scalar};
use group::Curve;
use sha2::{Digest, Sha512};
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

const SIG_DST: &[u8] = b"BLS_SIG_BLS12381G2_XMD:SHA-256_SSWU_RO_NUL_";
const RFC_DST: &[u8] = b"QUUX-V01-CS02-with-BLS12381G2_XMD:SHA-256_SSWU_RO_";

fn hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        write!(s, "{:02x}", b).unwrap();
    }
    s
}

fn scalar_from_seed(seed: &str) -> Scalar {
    let digest = Sha512::digest(seed.as_bytes());
    let mut wide = [0u8; 64];
    wide.copy_from_slice(&digest);
    Scalar::from_bytes_wide(&wide)
}

fn scalar_hex(s: &Scalar) -> String {
    // big-endian hex of the canonical value
    let mut le = s.to_bytes();
    le.reverse();
    hex(&le)
}

fn out_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../tests/vectors")
}

fn emit_multiples() {
    let mut scalars: Vec<(String, Scalar)> = vec![
        ("one".into(), Scalar::from(1u64)),
        ("two".into(), Scalar::from(2u64)),
        ("three".into(), Scalar::from(3u64)),
        ("small".into(), Scalar::from(0xfedc_ba98_7654_3210u64)),
        ("minus-one".into(), -Scalar::from(1u64)),
    ];
    for i in 0..8 {
        scalars.push((format!("wide-{}", i), scalar_from_seed(&format!("oracle-mult-{}", i))));
    }

    let mut g1 = String::from("[\n");
    let mut g2 = String::from("[\n");
    for (i, (label, k)) in scalars.iter().enumerate() {
        let sep = if i + 1 == scalars.len() { "" } else { "," };
        let p1 = (G1Projective::generator() * k).to_affine();
        let p2 = (G2Projective::generator() * k).to_affine();
        write!(
            g1,
            "  {{\"label\": \"{}\", \"scalar\": \"{}\", \"compressed\": \"{}\", \"uncompressed\": \"{}\"}}{}\n",
            label,
            scalar_hex(k),
            hex(&p1.to_compressed()),
            hex(&p1.to_uncompressed()),
            sep
        )
        .unwrap();
        write!(
            g2,
            "  {{\"label\": \"{}\", \"scalar\": \"{}\", \"compressed\": \"{}\", \"uncompressed\": \"{}\"}}{}\n",
            label,
            scalar_hex(k),
            hex(&p2.to_compressed()),
            hex(&p2.to_uncompressed()),
            sep
        )
        .unwrap();
    }
    g1.push_str("]\n");
    g2.push_str("]\n");
    fs::write(out_dir().join("g1_multiples.json"), g1).unwrap();
    fs::write(out_dir().join("g2_multiples.json"), g2).unwrap();
}

fn emit_hash_to_g2() {
    let rfc_msgs: Vec<&[u8]> = vec![
        b"",
        b"abc",
        b"abcdef0123456789",
        b"q128_qqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqq",
        b"a512_aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa",
    ];
    let sig_msgs: Vec<&[u8]> = vec![
        b"",
        b"abc",
        b"sample signing payload",
        b"role=clinician;dept=oncology",
        b"record 0003231 attending physician",
    ];

    let mut out = String::from("[\n");
    let mut first = true;
    for (dst_label, dst, msgs) in [("rfc", RFC_DST, &rfc_msgs), ("sig", SIG_DST, &sig_msgs)] {
        for msg in msgs {
            let p = <G2Projective as HashToCurve<ExpandMsgXmd<sha2::Sha256>>>::hash_to_curve(msg, dst)
                .to_affine();
            if !first {
                out.push_str(",\n");
            }
            first = false;
            write!(
                out,
                "  {{\"dst\": \"{}\", \"msg\": \"{}\", \"compressed\": \"{}\", \"uncompressed\": \"{}\"}}",
                dst_label,
                hex(msg),
                hex(&p.to_compressed()),
                hex(&p.to_uncompressed())
            )
            .unwrap();
        }
    }
    out.push_str("\n]\n");
    fs::write(out_dir().join("hash_to_g2.json"), out).unwrap();
}

fn emit_signatures() {
    let cases: Vec<(&str, &[u8])> = vec![
        ("oracle-sk-1", b"attribute: attending physician"),
        ("oracle-sk-2", b""),
        ("oracle-sk-2", b"role=nurse;ward=7"),
        ("oracle-sk-3", b"consent token 1EG4-TE5-MK72"),
        ("oracle-sk-4", b"insurance claim 9907184"),
    ];
    let mut out = String::from("[\n");
    for (i, (seed, msg)) in cases.iter().enumerate() {
        let sk = scalar_from_seed(seed);
        let pk = (G1Projective::generator() * sk).to_affine();
        let h = <G2Projective as HashToCurve<ExpandMsgXmd<sha2::Sha256>>>::hash_to_curve(msg, SIG_DST);
        let sig = (h * sk).to_affine();
        let sep = if i + 1 == cases.len() { "" } else { "," };
        write!(
            out,
            "  {{\"sk\": \"{}\", \"pk\": \"{}\", \"msg\": \"{}\", \"sig\": \"{}\"}}{}\n",
            scalar_hex(&sk),
            hex(&pk.to_compressed()),
            hex(msg),
            hex(&sig.to_compressed()),
            sep
        )
        .unwrap();
    }
    out.push_str("]\n");
    fs::write(out_dir().join("bls_sig.json"), out).unwrap();

    // Pairing cross-check data: e(g1, sig) == e(pk, H(msg)) holds for every
    // row above; additionally record one deliberately broken row.
    let sk = scalar_from_seed("oracle-sk-1");
    let pk = (G1Projective::generator() * sk).to_affine();
    let h = <G2Projective as HashToCurve<ExpandMsgXmd<sha2::Sha256>>>::hash_to_curve(
        b"attribute: attending physician".as_slice(),
        SIG_DST,
    );
    let bad_sig = (h * (sk + Scalar::from(1u64))).to_affine();
    let neg = format!(
        "[\n  {{\"pk\": \"{}\", \"msg\": \"{}\", \"sig\": \"{}\"}}\n]\n",
        hex(&pk.to_compressed()),
        hex(b"attribute: attending physician"),
        hex(&bad_sig.to_compressed())
    );
    fs::write(out_dir().join("bls_sig_invalid.json"), neg).unwrap();
}

fn main() {
    fs::create_dir_all(out_dir()).unwrap();
    // Confirm serialization identities before emitting anything.
    assert_eq!(
        G1Affine::from_compressed(&G1Affine::generator().to_compressed()).unwrap(),
        G1Affine::generator()
    );
    assert_eq!(
        G2Affine::from_compressed(&G2Affine::generator().to_compressed()).unwrap(),
        G2Affine::generator()
    );
    emit_multiples();
    emit_hash_to_g2();
    emit_signatures();
    println!("vectors written to {}", out_dir().display());
}
