use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use regex::Regex;

use super::predefined::predefined_catalog;
use super::{EvalError, EvaluationContext};
use crate::lex::Pos;
use crate::rules::{check_cycles, ConditionExpr, ExtError, ExtensionBody, ExtensionDecl, ExtensionKind, KnownNames, Signature};

pub type NativeCondition = Arc<dyn Fn(&EvaluationContext<'_, '_>, &[String]) -> bool + Send + Sync>;
/// `None` means the provider has nothing for this difference; the hint's
/// placeholder is then unresolved.
pub type NativePlaceholder = Arc<dyn Fn(&EvaluationContext<'_, '_>, &[String]) -> Option<String> + Send + Sync>;

/// Resolves the names rules use without `pc.`: natively registered
/// conditions and placeholders first, then declarations from `.irx` files.
/// Providers are the functions placeholder declarations bind to.
#[derive(Default)]
pub struct ExtensionRegistry {
    conditions: BTreeMap<String, (Signature, NativeCondition)>,
    placeholders: BTreeMap<String, NativePlaceholder>,
    providers: BTreeMap<String, (usize, NativePlaceholder)>,
    declared: Vec<ExtensionDecl>,
    declared_conditions: HashMap<String, ConditionExpr>,
    declared_placeholders: HashMap<String, (String, Vec<String>)>,
    regexes: Mutex<HashMap<String, Regex>>,
}

impl fmt::Debug for ExtensionRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtensionRegistry")
            .field("conditions", &self.conditions.keys().collect::<Vec<_>>())
            .field("placeholders", &self.placeholders.keys().collect::<Vec<_>>())
            .field("providers", &self.providers.keys().collect::<Vec<_>>())
            .field("declared", &self.declared)
            .finish()
    }
}

impl ExtensionRegistry {
    /// A registry with the element and change providers every context can
    /// answer.
    pub fn new() -> Self {
        let mut reg = Self::default();
        reg.register_provider("element.name", 0, |ctx, _| Some(ctx.subject_name().to_string()));
        reg.register_provider("element.qualifiedName", 0, |ctx, _| {
            Some(ctx.current.subject.qname.to_string())
        });
        reg.register_provider("change.description", 0, |ctx, _| Some(ctx.current.description()));
        reg.register_provider("change.oldValue", 0, |ctx, _| ctx.current.old_value.clone());
        reg.register_provider("change.newValue", 0, |ctx, _| ctx.current.new_value.clone());
        reg
    }

    pub fn register_condition(
        &mut self,
        name: &str,
        sig: Signature,
        f: impl Fn(&EvaluationContext<'_, '_>, &[String]) -> bool + Send + Sync + 'static,
    ) {
        self.conditions.insert(name.into(), (sig, Arc::new(f)));
    }

    pub fn register_placeholder(
        &mut self,
        name: &str,
        f: impl Fn(&EvaluationContext<'_, '_>, &[String]) -> Option<String> + Send + Sync + 'static,
    ) {
        self.placeholders.insert(name.into(), Arc::new(f));
    }

    pub fn register_provider(
        &mut self,
        path: &str,
        arity: usize,
        f: impl Fn(&EvaluationContext<'_, '_>, &[String]) -> Option<String> + Send + Sync + 'static,
    ) {
        self.providers.insert(path.into(), (arity, Arc::new(f)));
    }

    /// Adds `.irx` declarations. Names must be new per kind and the combined
    /// condition graph must stay acyclic.
    pub fn declare(&mut self, exts: &[ExtensionDecl]) -> Result<(), ExtError> {
        let mut all = self.declared.clone();
        for e in exts {
            let taken = match e.kind() {
                ExtensionKind::Condition => self.declared_conditions.contains_key(&e.name),
                ExtensionKind::Placeholder => self.declared_placeholders.contains_key(&e.name),
            };
            if taken || all.iter().any(|d| d.name == e.name && d.kind() == e.kind()) {
                return Err(ExtError::Duplicate {
                    kind: e.kind(),
                    name: e.name.clone(),
                    pos: Pos::default(),
                });
            }
            all.push(e.clone());
        }
        check_cycles(&all)?;
        for e in exts {
            match &e.body {
                ExtensionBody::Condition(c) => {
                    self.declared_conditions.insert(e.name.clone(), c.clone());
                }
                ExtensionBody::Placeholder { provider, args } => {
                    self.declared_placeholders
                        .insert(e.name.clone(), (provider.clone(), args.clone()));
                }
            }
        }
        self.declared = all;
        Ok(())
    }

    pub fn declarations(&self) -> &[ExtensionDecl] {
        &self.declared
    }

    pub fn native_condition(&self, name: &str) -> Option<&(Signature, NativeCondition)> {
        self.conditions.get(name)
    }

    pub fn declared_condition(&self, name: &str) -> Option<&ConditionExpr> {
        self.declared_conditions.get(name)
    }

    pub fn native_placeholder(&self, name: &str) -> Option<&NativePlaceholder> {
        self.placeholders.get(name)
    }

    pub fn declared_placeholder(&self, name: &str) -> Option<(&str, &[String])> {
        self.declared_placeholders
            .get(name)
            .map(|(p, a)| (p.as_str(), a.as_slice()))
    }

    pub fn provider(&self, path: &str) -> Option<&(usize, NativePlaceholder)> {
        self.providers.get(path)
    }

    /// Catalog for [`crate::rules::validate`]: the predefined conditions plus
    /// everything registered natively. Declarations are passed separately.
    pub fn known_names(&self) -> KnownNames {
        KnownNames {
            predefined: predefined_catalog().into_iter().collect(),
            conditions: self.conditions.iter().map(|(n, (s, _))| (n.clone(), *s)).collect(),
            placeholders: self.placeholders.keys().cloned().collect(),
            providers: self.providers.iter().map(|(p, (n, _))| (p.clone(), *n)).collect(),
        }
    }

    pub(crate) fn regex(&self, pattern: &str) -> Result<Regex, EvalError> {
        let mut cache = self.regexes.lock().expect("regex cache poisoned");
        if let Some(re) = cache.get(pattern) {
            return Ok(re.clone());
        }
        let re = Regex::new(pattern).map_err(|e| EvalError::BadRegex {
            pattern: pattern.into(),
            message: e.to_string(),
        })?;
        cache.insert(pattern.into(), re.clone());
        Ok(re)
    }
}
