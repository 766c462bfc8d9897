use serde::{Deserialize, Serialize};

/// Accumulated guideline text. Each successful reflection appends one dated
/// stanza; nothing is ever removed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BehaviorGuideline {
    pub index: u32,
    pub text: String,
    pub generated_at_tick: u32,
}

impl BehaviorGuideline {
    pub fn is_empty(&self) -> bool {
        self.index == 0
    }

    /// Guideline `index + 1`: the old text followed by `addition`.
    pub fn merged(&self, addition: &str, tick: u32) -> BehaviorGuideline {
        let index = self.index + 1;
        let mut text = self.text.clone();
        if !text.is_empty() {
            text.push_str("\n\n");
        }
        text.push_str(&format!("Guideline {index} (tick {tick}):\n{}", addition.trim()));
        BehaviorGuideline { index, text, generated_at_tick: tick }
    }

    /// Text as shown in prompts.
    pub fn prompt_text(&self) -> &str {
        if self.text.is_empty() {
            "(no guideline yet)"
        } else {
            &self.text
        }
    }
}

/// Reflection runs every `interval` ticks, offset by half an interval from ToM.
pub fn reflection_due(tick: u32, interval: u32) -> bool {
    interval > 0 && tick % interval == interval / 2
}
