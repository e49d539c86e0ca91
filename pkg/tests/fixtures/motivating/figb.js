const loginlogs = require('../models/loginlogs');

loginlogController.logout = async (req, res, nxt) => {
  try {
    let token = req.body.token;
    token = token.replace('Bearer ', '');
    await loginlogs.findOneAndUpdate({ token: token }, { logout: Date.now() });
    console.log(token);
    res.json({ done: true });
  } catch (err) {
    nxt(err);
  }
};
