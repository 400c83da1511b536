use super::context::DocumentContext;
use super::sieves::{precise_sieves, string_sieves};
use super::types::{MentionSequence, ResolutionMode};

/// Which sieve family wins when a mention satisfies both.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ModePrecedence {
    #[default]
    StrFirst,
    PrecFirst,
}

/// Deterministic mode of the mention at 1-based position `j`.
pub fn mode_of(ms: &MentionSequence, j: usize, ctx: &DocumentContext<'_>, precedence: ModePrecedence) -> ResolutionMode {
    let m_j = ms.mention(j);
    let earlier = &ms.mentions[..j - 1];
    let str_hit = || earlier.iter().any(|m_k| string_sieves(m_j, m_k));
    let prec_hit = || earlier.iter().any(|m_k| precise_sieves(m_j, m_k, ctx));
    match precedence {
        ModePrecedence::StrFirst if str_hit() => ResolutionMode::Str,
        ModePrecedence::StrFirst if prec_hit() => ResolutionMode::Prec,
        ModePrecedence::PrecFirst if prec_hit() => ResolutionMode::Prec,
        ModePrecedence::PrecFirst if str_hit() => ResolutionMode::Str,
        _ => ResolutionMode::Attr,
    }
}

/// Sets every mention's mode. Pure in the document: running it again on
/// the output changes nothing.
pub fn assign_modes(ms: &mut MentionSequence, ctx: &DocumentContext<'_>, precedence: ModePrecedence) {
    let modes: Vec<ResolutionMode> = (1..=ms.len())
        .map(|j| mode_of(ms, j, ctx, precedence))
        .collect();
    for (m, mode) in ms.mentions.iter_mut().zip(modes) {
        m.mode = Some(mode);
    }
}
