//! Stream derivation so every randomized step is a pure function of
//! `(global seed, step name, item index)`, independent of execution order.

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(global: u64, step: &str, index: u64) -> u64 {
    // FNV-1a over the step name
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for b in step.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    splitmix64(splitmix64(global ^ h).wrapping_add(index))
}
