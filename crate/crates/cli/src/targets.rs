//! Published Polish dataset sizes, shown next to whatever a build produces.

use pmatch_core::pair_builder::SplitKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeTarget {
    pub dataset: &'static str,
    pub split: SplitKind,
    pub positives: usize,
    pub negatives: usize,
}

const fn t(dataset: &'static str, split: SplitKind, positives: usize, negatives: usize) -> SizeTarget {
    SizeTarget {
        dataset,
        split,
        positives,
        negatives,
    }
}

pub const POLISH_TARGETS: [SizeTarget; 9] = [
    t("chemia", SplitKind::TrainSmall, 503, 1_509),
    t("chemia", SplitKind::TrainMedium, 1_509, 4_527),
    t("chemia", SplitKind::TrainLarge, 3_521, 10_563),
    t("napoje", SplitKind::TrainSmall, 381, 1_143),
    t("napoje", SplitKind::TrainMedium, 1_143, 3_429),
    t("napoje", SplitKind::TrainLarge, 2_667, 8_001),
    t("all", SplitKind::TrainSmall, 884, 2_652),
    t("all", SplitKind::TrainMedium, 2_652, 7_956),
    t("all", SplitKind::TrainLarge, 6_188, 18_564),
];

pub fn target_for(dataset: &str, split: SplitKind) -> Option<SizeTarget> {
    POLISH_TARGETS
        .iter()
        .copied()
        .find(|t| t.dataset == dataset && t.split == split)
}
