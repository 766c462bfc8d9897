use std::collections::BTreeMap;

use super::{CompletionError, Purpose};

#[derive(Debug, Clone, PartialEq)]
pub enum MockReply {
    Text(String),
    Fail(String),
    Timeout,
}

impl MockReply {
    pub fn text(s: impl Into<String>) -> Self {
        MockReply::Text(s.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WhenExhausted {
    /// Start again from the first reply.
    #[default]
    Cycle,
    /// Keep returning the final reply.
    RepeatLast,
    /// Fail every further request.
    Fail,
}

/// Canned replies per purpose, consumed in order.
#[derive(Debug, Clone, Default)]
pub struct MockScript {
    replies: BTreeMap<Purpose, Vec<MockReply>>,
    cursor: BTreeMap<Purpose, usize>,
    pub when_exhausted: WhenExhausted,
}

impl MockScript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, purpose: Purpose, replies: Vec<MockReply>) -> Self {
        self.replies.insert(purpose, replies);
        self
    }

    pub fn with_text(self, purpose: Purpose, text: impl Into<String>) -> Self {
        self.with(purpose, vec![MockReply::Text(text.into())])
    }

    pub fn exhausted(mut self, mode: WhenExhausted) -> Self {
        self.when_exhausted = mode;
        self
    }

    /// Replies a kitchen session can run on: a belief in the usual four-part
    /// shape, JSON code-as-policy snippets, guideline bullets, and a mix of
    /// short messages and silence.
    pub fn kitchen_default() -> Self {
        MockScript::new()
            .with(
                Purpose::ToMInference,
                vec![MockReply::text(
                    "Tendency: The human mostly handles lettuce and bread and moves clockwise around the center counter.\n\
                     Convention: The human leaves finished ingredients on the center counter for me.\n\
                     Plan: The human will keep chopping lettuce for the next LettuceBurger order.\n\
                     Coordination guide: I should focus on cooking and plating beef, serve beef orders, and keep the pans safe.",
                )],
            )
            .with(
                Purpose::CodeAsPolicy,
                vec![
                    MockReply::text(
                        r#"{"snippets": [{"condition": "pan_on_fire", "macro": "PutoutFire"}, {"condition": "pan_empty and order(BeefBurger)", "macro": "Prepare(Beef)"}], "order": "BeefBurger"}"#,
                    ),
                    MockReply::text(
                        r#"{"snippets": [{"condition": "beef_ready", "macro": "Assemble(BeefLettuceBurger)"}, {"condition": "order(LettuceBurger) and not lettuce_chopped", "macro": "Prepare(Lettuce)"}]}"#,
                    ),
                    MockReply::text(r#"{"snippets": [], "order": null}"#),
                ],
            )
            .with(
                Purpose::Reflection,
                vec![MockReply::text(
                    "- Plate well-done beef immediately so the pan never catches fire.\n\
                     - Leave lettuce work to the human unless a lettuce order is about to expire.",
                )],
            )
            .with(
                Purpose::Communication,
                vec![
                    MockReply::text("SAY: I will cook the beef now"),
                    MockReply::text("[SILENT]"),
                    MockReply::text("SAY: Please chop lettuce, I handle beef"),
                    MockReply::text("[SILENT]"),
                ],
            )
    }

    /// Next scripted outcome for `purpose`.
    pub(crate) fn next(&mut self, purpose: Purpose) -> Result<String, CompletionError> {
        let Some(list) = self.replies.get(&purpose).filter(|l| !l.is_empty()) else {
            return Err(CompletionError::Scripted { message: format!("no mock replies scripted for {purpose}") });
        };
        let cursor = self.cursor.entry(purpose).or_insert(0);
        let idx = if *cursor < list.len() {
            *cursor
        } else {
            match self.when_exhausted {
                WhenExhausted::Cycle => *cursor % list.len(),
                WhenExhausted::RepeatLast => list.len() - 1,
                WhenExhausted::Fail => {
                    *cursor += 1;
                    return Err(CompletionError::Scripted { message: format!("mock replies for {purpose} exhausted") });
                }
            }
        };
        *cursor += 1;
        match &list[idx] {
            MockReply::Text(t) => Ok(t.clone()),
            MockReply::Fail(m) => Err(CompletionError::Scripted { message: m.clone() }),
            MockReply::Timeout => Err(CompletionError::Timeout { after_ms: 0 }),
        }
    }
}
