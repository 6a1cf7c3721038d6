//! Identifiers and enumerations shared by every stage of the pipeline.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// First and last calendar year of every projection.
pub const BASE_YEAR: i32 = 2015;
pub const HORIZON_YEAR: i32 = 2100;

/// ISO 3166-1 alpha-3 country code, stored upper-case.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iso3(String);

impl Iso3 {
    pub fn new(code: &str) -> Result<Self, String> {
        let code = code.trim();
        if code.len() == 3 && code.bytes().all(|b| b.is_ascii_alphabetic()) {
            Ok(Iso3(code.to_ascii_uppercase()))
        } else {
            Err(format!("'{code}' is not a 3-letter country code"))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Iso3 {
    type Error = String;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Iso3::new(&value)
    }
}

impl From<Iso3> for String {
    fn from(value: Iso3) -> Self {
        value.0
    }
}

impl fmt::Display for Iso3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Lower-cases and drops separators so "Upper middle income", "upper_middle"
/// and "UpperMiddle" all compare equal.
fn normalize_token(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .map(|c| c.to_ascii_lowercase())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IncomeGroup {
    High,
    UpperMiddle,
    LowerMiddle,
    Low,
}

impl IncomeGroup {
    pub const ALL: [IncomeGroup; 4] = [
        IncomeGroup::High,
        IncomeGroup::UpperMiddle,
        IncomeGroup::LowerMiddle,
        IncomeGroup::Low,
    ];

    pub fn token(self) -> &'static str {
        match self {
            IncomeGroup::High => "high",
            IncomeGroup::UpperMiddle => "upper_middle",
            IncomeGroup::LowerMiddle => "lower_middle",
            IncomeGroup::Low => "low",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            IncomeGroup::High => "High income",
            IncomeGroup::UpperMiddle => "Upper-middle income",
            IncomeGroup::LowerMiddle => "Lower-middle income",
            IncomeGroup::Low => "Low income",
        }
    }
}

impl FromStr for IncomeGroup {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = normalize_token(s);
        let norm = norm.strip_suffix("income").unwrap_or(&norm);
        match norm {
            "high" => Ok(IncomeGroup::High),
            "uppermiddle" => Ok(IncomeGroup::UpperMiddle),
            "lowermiddle" => Ok(IncomeGroup::LowerMiddle),
            "low" => Ok(IncomeGroup::Low),
            _ => Err(format!("unknown income group '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    EastAsiaPacific,
    EuropeCentralAsia,
    LatinAmericaCaribbean,
    MiddleEastNorthAfrica,
    NorthAmerica,
    SouthAsia,
    SubSaharanAfrica,
}

impl Region {
    pub const ALL: [Region; 7] = [
        Region::EastAsiaPacific,
        Region::EuropeCentralAsia,
        Region::LatinAmericaCaribbean,
        Region::MiddleEastNorthAfrica,
        Region::NorthAmerica,
        Region::SouthAsia,
        Region::SubSaharanAfrica,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Region::EastAsiaPacific => "east_asia_pacific",
            Region::EuropeCentralAsia => "europe_central_asia",
            Region::LatinAmericaCaribbean => "latin_america_caribbean",
            Region::MiddleEastNorthAfrica => "middle_east_north_africa",
            Region::NorthAmerica => "north_america",
            Region::SouthAsia => "south_asia",
            Region::SubSaharanAfrica => "sub_saharan_africa",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Region::EastAsiaPacific => "East Asia and Pacific",
            Region::EuropeCentralAsia => "Europe and Central Asia",
            Region::LatinAmericaCaribbean => "Latin America and Caribbean",
            Region::MiddleEastNorthAfrica => "Middle East and North Africa",
            Region::NorthAmerica => "North America",
            Region::SouthAsia => "South Asia",
            Region::SubSaharanAfrica => "Sub-Saharan Africa",
        }
    }
}

impl FromStr for Region {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = normalize_token(s).replace("and", "").replace("the", "");
        match norm.as_str() {
            "eastasiapacific" => Ok(Region::EastAsiaPacific),
            "europecentralasia" => Ok(Region::EuropeCentralAsia),
            "latinamericacaribbean" => Ok(Region::LatinAmericaCaribbean),
            "middleeastnorthafrica" => Ok(Region::MiddleEastNorthAfrica),
            "northamerica" => Ok(Region::NorthAmerica),
            "southasia" => Ok(Region::SouthAsia),
            "subsaharanafrica" => Ok(Region::SubSaharanAfrica),
            _ => Err(format!("unknown region '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variable {
    Fertility,
    Mortality,
}

impl Variable {
    pub fn token(self) -> &'static str {
        match self {
            Variable::Fertility => "fertility",
            Variable::Mortality => "mortality",
        }
    }
}

impl FromStr for Variable {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match normalize_token(s).as_str() {
            "fertility" => Ok(Variable::Fertility),
            "mortality" => Ok(Variable::Mortality),
            _ => Err(format!("unknown variable '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sex {
    Female,
    Male,
    Both,
}

impl Sex {
    pub fn token(self) -> &'static str {
        match self {
            Sex::Female => "female",
            Sex::Male => "male",
            Sex::Both => "both",
        }
    }
}

impl FromStr for Sex {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match normalize_token(s).as_str() {
            "female" | "f" => Ok(Sex::Female),
            "male" | "m" => Ok(Sex::Male),
            "both" | "b" | "total" => Ok(Sex::Both),
            _ => Err(format!("unknown sex '{s}'")),
        }
    }
}

/// Five-year age band: index 0 is "0-4", index 20 is the open "100+" band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgeGroup(u8);

impl AgeGroup {
    pub const COUNT: usize = 21;
    pub const OPEN: AgeGroup = AgeGroup(20);
    /// Bands 15-19 through 40-44.
    pub const FERTILE_FIRST: usize = 3;
    pub const FERTILE_COUNT: usize = 6;

    pub fn new(index: usize) -> Option<Self> {
        (index < Self::COUNT).then_some(AgeGroup(index as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> impl Iterator<Item = AgeGroup> {
        (0..Self::COUNT as u8).map(AgeGroup)
    }

    pub fn fertile() -> impl Iterator<Item = AgeGroup> {
        (Self::FERTILE_FIRST..Self::FERTILE_FIRST + Self::FERTILE_COUNT).map(|i| AgeGroup(i as u8))
    }

    pub fn is_fertile(self) -> bool {
        (Self::FERTILE_FIRST..Self::FERTILE_FIRST + Self::FERTILE_COUNT).contains(&self.index())
    }

    pub fn lower_age(self) -> u32 {
        5 * self.0 as u32
    }
}

impl fmt::Display for AgeGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == AgeGroup::OPEN {
            write!(f, "100+")
        } else {
            let lo = self.lower_age();
            write!(f, "{}-{}", lo, lo + 4)
        }
    }
}

impl FromStr for AgeGroup {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "100+" {
            return Ok(AgeGroup::OPEN);
        }
        let bad = || format!("invalid age group '{s}'");
        let (lo, hi) = t.split_once('-').ok_or_else(bad)?;
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        if !lo.is_multiple_of(5) || hi != lo + 4 || lo >= 100 {
            return Err(bad());
        }
        Ok(AgeGroup((lo / 5) as u8))
    }
}
