import unittest

from fastapi.testclient import TestClient

from api.main import app


class ApiTests(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.client = TestClient(app)

    def test_bounds(self):
        response = self.client.post("/bounds", json={"m": 6, "T": 2, "s": 2, "k": 2, "ell": 2})
        self.assertEqual(response.status_code, 200)
        body = response.json()
        self.assertEqual((body["ub_joint"], body["ub_q"], body["ub_s"]), (30, 6, 15))
        self.assertEqual((body["thm1_joint"], body["thm1_q"]), (16, 4))

    def test_bounds_rejects_large_side_information(self):
        response = self.client.post("/bounds", json={"m": 3, "T": 1, "s": 3})
        self.assertEqual(response.status_code, 422)

    def test_scheme(self):
        response = self.client.post("/scheme", json={"m": 6, "T": 2, "ell": 2, "s": 2, "verify": True})
        self.assertEqual(response.status_code, 200)
        body = response.json()
        self.assertAlmostEqual(body["lb_s"], 3.5, places=9)
        self.assertTrue(body["match"])

    def test_scheme_rejects_invalid_width(self):
        response = self.client.post("/scheme", json={"m": 6, "T": 2, "ell": 4, "s": 3})
        self.assertEqual(response.status_code, 422)

    def test_decodable(self):
        payload = {"rows": [[1, 1, 0, 0, 0], [0, 0, 1, 1, 0]], "s": 1, "list_pairs": True}
        response = self.client.post("/decodable", json=payload)
        self.assertEqual(response.status_code, 200)
        body = response.json()
        self.assertEqual((body["size_joint"], body["size_q"], body["size_s"]), (4, 4, 4))
        self.assertEqual(body["pairs"], ["2:1", "1:2", "4:3", "3:4"])

    def test_decodable_rejects_entries_outside_the_field(self):
        response = self.client.post("/decodable", json={"rows": [[1, 9]], "modulus": 7, "s": 1})
        self.assertEqual(response.status_code, 422)

    def test_figure2(self):
        response = self.client.post("/figure2", json={"m": 30, "s": 3, "T_values": [3]})
        self.assertEqual(response.status_code, 200)
        rows = response.json()
        self.assertEqual([row["ell"] for row in rows], [1, 2, 3, 4])
        self.assertAlmostEqual(rows[3]["r_q"], 0.4, places=12)

    def test_asymptotics(self):
        response = self.client.post("/asymptotics", json={"c": 0.5, "b": 0, "T": 2, "m_values": [10, 20]})
        self.assertEqual(response.status_code, 200)
        self.assertEqual([row["m"] for row in response.json()], [10, 20])


if __name__ == "__main__":
    unittest.main()
