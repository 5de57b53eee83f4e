//! Per-block cooperation policies.

use std::fmt;
use std::str::FromStr;

use crate::channel::ChannelBlock;
use crate::miso::{effective_snr, mutual_info_block};
use crate::params::{link_outage, SystemParams};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProtocolKind {
    /// Direct transmission, relay always silent.
    Direct,
    /// Selective DF: relay forwards whenever S->R is not in outage.
    Sdf,
    /// Incremental selective DF: relay forwards when S->R is not in outage
    /// and the destination signals a direct-link outage.
    Isdf,
    /// Relay forwards on every block.
    NonSelective,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 4] = [
        ProtocolKind::Direct,
        ProtocolKind::Sdf,
        ProtocolKind::Isdf,
        ProtocolKind::NonSelective,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Direct => "DT",
            ProtocolKind::Sdf => "SDF",
            ProtocolKind::Isdf => "ISDF",
            ProtocolKind::NonSelective => "NSFDR",
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownProtocol(pub String);

impl fmt::Display for UnknownProtocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown protocol `{}` (expected DT, SDF, ISDF or NSFDR)",
            self.0
        )
    }
}

impl std::error::Error for UnknownProtocol {}

impl FromStr for ProtocolKind {
    type Err = UnknownProtocol;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dt" | "direct" => Ok(ProtocolKind::Direct),
            "sdf" => Ok(ProtocolKind::Sdf),
            "isdf" => Ok(ProtocolKind::Isdf),
            "nsfdr" | "nonselective" | "nonselectivefdr" | "fdr" => Ok(ProtocolKind::NonSelective),
            _ => Err(UnknownProtocol(s.to_string())),
        }
    }
}

/// Whether the relay transmits on this block. ISDF feedback is one ideal,
/// instantaneous bit sent at block start.
pub fn decide_cooperation<T: Scalar>(
    kind: ProtocolKind,
    block: &ChannelBlock<T>,
    params: &SystemParams<T>,
) -> bool {
    let relay_decodes = !link_outage(block.gamma_sr(), params);
    match kind {
        ProtocolKind::Direct => false,
        ProtocolKind::NonSelective => true,
        ProtocolKind::Sdf => relay_decodes,
        ProtocolKind::Isdf => relay_decodes && link_outage(block.gamma_sd(), params),
    }
}

/// Result of one block under one policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockOutcome<T> {
    pub relay_active: bool,
    pub effective_snr: T,
    pub in_outage: bool,
    /// Mutual information of the block in bits.
    pub info_bits: T,
}

/// Runs one block: decide, compute block mutual information (relay power
/// zeroed when silent), convert to effective SNR, test against `gamma_th`.
///
/// A non-selective relay that failed to decode forwards garbage; such
/// blocks are scored as outage with zero effective SNR.
pub fn run_block<T: Scalar>(
    kind: ProtocolKind,
    block: &ChannelBlock<T>,
    params: &SystemParams<T>,
) -> BlockOutcome<T> {
    let relay_active = decide_cooperation(kind, block, params);
    if kind == ProtocolKind::NonSelective && link_outage(block.gamma_sr(), params) {
        return BlockOutcome {
            relay_active,
            effective_snr: T::zero(),
            in_outage: true,
            info_bits: T::zero(),
        };
    }
    let info_bits = mutual_info_block(block, params, relay_active);
    let effective_snr = if relay_active {
        effective_snr(info_bits, params.block_len())
    } else {
        // 2^{log2(1 + g)} - 1 == g; skip the roundtrip.
        block.gamma_sd()
    };
    BlockOutcome {
        relay_active,
        effective_snr,
        in_outage: link_outage(effective_snr, params),
        info_bits,
    }
}
