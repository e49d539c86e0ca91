const db = require('datastore');

// persist an order once the form payload has been cleaned up
function storeOrder(req, res) {
  const input = getInput(req);
  const safe = sanitize(input);
  db.putRecord({ payload: safe });
  res.send('stored');
}

function auditOrder(req, res) {
  const input = getInput(req);
  const line = scrub(input);
  console.log(line);
}
