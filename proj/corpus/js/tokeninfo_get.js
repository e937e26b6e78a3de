function validateToken(token) {
  $.get('https://www.googleapis.com/oauth2/v1/tokeninfo?access_token=' + token, function (info) {
    if (info.audience !== CLIENT_ID) logout();
  });
}
