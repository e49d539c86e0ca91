const db = require('datastore');

function saveComment(req, res) {
  const raw = getInput(req);
  const clean = sanitize(raw);
  db.putRecord({ payload: clean });
  res.send('ok');
}

function logComment(req, res) {
  const raw = getInput(req);
  const entry = scrub(raw);
  console.log(entry);
}
