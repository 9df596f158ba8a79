"""
Classe principal do sistema de verificação de reticulados CHL.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence, Tuple

from lattice_system.catalog.families import (
    Catalog, CuspSetup, GroupInstance, cusp_setup, instantiate, load_catalog, normalize_params,
)
from lattice_system.catalog.strata import kappa
from lattice_system.config import ConfigManager
from lattice_system.exceptions import NoStratumTable
from lattice_system.generators.serializers import (
    display, format_elem, incommensurability_to_json, instance_to_json, profile_to_json, verdict_to_json,
)
from lattice_system.groups.arith import adjoint_trace_field, arithmeticity, classify_element
from lattice_system.groups.cusp import (
    CuspProfile, IncommensurabilityVerdict, incommensurable_cusps, parabolic_decompose, translation_lattice,
)
from lattice_system.groups.reflect import verify_presentation
from lattice_system.utils.progress_reporter import ProgressReporter
from lattice_system.utils.simple_cache import SimpleCacheManager

logger = logging.getLogger("LatticeSystem")


class LatticeVerificationSystem:
    """Orquestra catálogo, verificações exatas, cache de veredictos e relatórios."""

    def __init__(
        self,
        env_path: str = ".env",
        verbose_init: bool = False,
        catalog_path: Optional[str] = None,
        use_cache: bool = True,
        **overrides,
    ):
        """
        Inicializa o sistema.

        Args:
            env_path: Caminho para o arquivo .env
            verbose_init: Se deve registrar a inicialização em INFO
            catalog_path: Catálogo alternativo (tem precedência sobre CHL_CATALOG_PATH)
            use_cache: Se False, veredictos nunca são lidos nem gravados no cache
            **overrides: word_len, cusp_word_len, precision_bits, jobs (valores da CLI)
        """
        self.config = ConfigManager(env_path)
        for name, value in overrides.items():
            if value is not None and hasattr(self.config, name):
                setattr(self.config, name, value)
        if catalog_path:
            self.config.catalog_path = catalog_path

        self.catalog: Catalog = load_catalog(self.config.catalog_path)
        self.catalog_digest = self.config.catalog_digest(self.config.catalog_path)
        self.cache_manager = SimpleCacheManager(self.config.cache_dir) if use_cache else None

        if verbose_init:
            logger.info(f"🚀 Sistema inicializado: catálogo {self.catalog.version}, {len(self.catalog.families)} famílias")

    # === Instâncias ===

    def instantiate(self, family: str, params=None) -> GroupInstance:
        return instantiate(family, params, self.catalog)

    def classify_words(self, inst: GroupInstance, words: Sequence[str]) -> Dict[str, str]:
        """Tipo (elíptico, parabólico, loxodrômico) de cada palavra nos geradores."""
        return {
            word: str(classify_element(inst.word(word), inst.form, self.config.finite_order_bound))
            for word in words
        }

    def instance_summary(self, family: str, params=None, words: Sequence[str] = ()) -> Tuple[Dict[str, Any], bool]:
        """
        Instancia a família e verifica sua apresentação.

        Args:
            family: Nome da família
            params: Parâmetros (ou None)
            words: Palavras a classificar, além da verificação das relações

        Returns:
            (documento JSON, True se todas as relações valem)
        """
        inst = self.instantiate(family, params)
        report = inst.verify(self.config.jobs)
        data = instance_to_json(inst, self.config.precision_bits)
        data["presentation"] = {
            "relations": len(report.results),
            "failures": report.failures,
            "first_failure": None if report.all_passed else str(report.first_failure.relation),
        }
        if words:
            data["classified_words"] = self.classify_words(inst, words)
        if report.all_passed:
            logger.info(f"✅ {inst}: {len(report.results)} relações verificadas")
        else:
            logger.error(f"❌ {inst}: relação {report.first_failure.relation} falhou")
        return data, report.all_passed

    # === Veredictos ===

    def compute_verdict(self, family: str, params, jobs: Optional[int] = None) -> Dict[str, Any]:
        """Corpo de traços adjunto e aritmeticidade de uma linha, usando o cache quando possível."""
        spec = self.catalog.family(family)
        value = normalize_params(spec, params)
        key = SimpleCacheManager.verdict_key(self.catalog_digest, family, value, self.config.word_len)
        if self.cache_manager and self.cache_manager.is_cache_valid(key, self.config.cache_max_age_hours):
            cached = self.cache_manager.load_data(key)
            if cached is not None:
                logger.debug(f"Veredicto de {family} {list(value)} lido do cache")
                return cached

        inst = self.instantiate(family, value)
        trace_field = adjoint_trace_field(
            inst.generators,
            self.config.word_len,
            spec.trace_witnesses,
            self.config.jobs if jobs is None else jobs,
        )
        verdict = arithmeticity(inst.form, inst.generators, trace_field)
        data = verdict_to_json(family, value, trace_field, verdict)
        if self.cache_manager:
            self.cache_manager.save_data(key, data)
        return data

    def table3_rows(self, reporter: Optional[ProgressReporter] = None) -> List[Dict[str, Any]]:
        """
        Todas as linhas da tabela de veredictos, na ordem do catálogo, com valores
        calculados e esperados.
        """
        rows = self.catalog.table3
        jobs = max(1, self.config.jobs)
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(self.compute_verdict, row.family, row.params, 1) for row in rows]
            iterable = reporter.track(futures, "Veredictos", len(futures)) if reporter else futures
            verdicts = [future.result() for future in iterable]

        results = []
        for row, verdict in zip(rows, verdicts):
            results.append({
                "family": row.family,
                "params": list(row.params),
                "cocompact": row.cocompact,
                "arithmetic": verdict["arithmetic"],
                "trace_field": verdict["trace_field"],
                "expected_arithmetic": row.arithmetic,
                "expected_trace_field": row.trace_field,
                "conjugate_signatures": verdict["conjugate_signatures"],
            })
            if verdict["arithmetic"] != row.arithmetic or verdict["trace_field"] != row.trace_field:
                logger.warning(f"⚠️ {row.family} {list(row.params)} diverge da tabela esperada")
        return results

    def table2d_rows(self) -> List[Dict[str, Any]]:
        return [
            {
                "family": meta.family,
                "description": meta.description,
                "p": r.p,
                "cocompact": r.cocompact,
                "arithmetic": r.arithmetic,
            }
            for meta in self.catalog.metadata_only.values()
            for r in meta.rows
        ]

    # === Cúspides ===

    def cusp_key(self, family: str, params: Optional[Sequence[int]] = None) -> str:
        """Chave do catálogo de cúspides: "G29:3" ou o nome da família."""
        if family in self.catalog.cusps:
            return family
        if params:
            key = f"{family}:" + ":".join(str(p) for p in params)
            if key in self.catalog.cusps:
                return key
        raise NoStratumTable(f"sem cúspide catalogada para {family} {list(params or [])}")

    def cusp_profile(self, key: str) -> Tuple[CuspSetup, CuspProfile]:
        setup = cusp_setup(key, self.catalog)
        profile = translation_lattice(
            setup.generators,
            setup.form,
            self.config.cusp_word_len,
            self.config.max_order,
            setup.spec.expected_linear_order,
        )
        return setup, profile

    def cusp_summary(self, key: str) -> Tuple[Dict[str, Any], bool]:
        """
        Perfil da cúspide com as palavras de translação do catálogo avaliadas.

        Returns:
            (documento JSON, True se palavras, ordem linear, relações lineares e identidades de conjugação conferem)
        """
        setup, profile = self.cusp_profile(key)
        data = profile_to_json(profile, self.config.precision_bits)
        data["cusp"] = key
        ok = "NotALattice" not in profile.flags and "lower_bound" not in profile.flags

        spec = setup.spec
        if spec.stratum:
            table = self.catalog.strata.get(setup.instance.spec.strata_table)
            if table is not None:
                data["stratum"] = {"name": spec.stratum, "kappa": str(kappa(table.row(spec.stratum), spec.params))}

        named = {}
        elements = setup.translation_elements()
        for name, word in spec.translation_words.items():
            h = elements[name]
            entry = {"word": word, "translation": h.is_translation(), "w": [format_elem(a) for a in h.w], "t": format_elem(h.t)}
            expected = setup.expected_translation(name)
            if expected is not None:
                entry["matches_expected"] = expected == h
                ok = ok and expected == h
            ok = ok and h.is_translation()
            named[name] = entry
        data["named_translations"] = named

        if spec.linear_relations:
            linear = [parabolic_decompose(g, setup.form).B for g in setup.generators]
            report = verify_presentation(linear, spec.linear_relations)
            data["linear_presentation"] = {"relations": len(report.results), "failures": report.failures}
            ok = ok and report.all_passed

        expected_vertical = setup.expected_vertical_generator()
        if expected_vertical is not None:
            data["expected_vertical_generator"] = display(expected_vertical, self.config.precision_bits)
            ok = ok and profile.vertical_generator == expected_vertical

        if spec.conjugation_identities:
            checks = setup.conjugation_checks()
            data["conjugation_identities"] = [{"identity": c.text, "holds": c.holds} for c in checks]
            ok = ok and all(c.holds for c in checks)
        return data, ok

    def incommensurable(self, key_a: str, key_b: str) -> IncommensurabilityVerdict:
        _, profile_a = self.cusp_profile(key_a)
        _, profile_b = self.cusp_profile(key_b)
        verdict = incommensurable_cusps(profile_a, profile_b)
        logger.info(f"🔎 {key_a} x {key_b}: {verdict.label}")
        return verdict

    def incommensurable_summary(self, key_a: str, key_b: str) -> Dict[str, Any]:
        data = incommensurability_to_json(self.incommensurable(key_a, key_b), self.config.precision_bits)
        data["a"], data["b"] = key_a, key_b
        return data

    def get_cache_status(self):
        if self.cache_manager is None:
            return None
        return self.cache_manager.get_cache_status()

    def clear_cache(self) -> int:
        """Apaga os veredictos guardados; devolve quantos arquivos foram removidos."""
        status = self.get_cache_status()
        if status is None or status.empty:
            return 0
        if not self.cache_manager.clear_cache():
            return 0
        logger.info(f"🧹 {len(status)} veredictos removidos do cache")
        return len(status)
